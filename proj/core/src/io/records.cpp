#include "vpg/io/records.hpp"

#include <nlohmann/json.hpp>

#include "vpg/common/errors.hpp"

namespace vpg::io {

using nlohmann::json;

std::string sensor_frame_line(const sut::SensorFrame& frame,
                              const scenario::Conditions& conditions) {
  json j;
  j["type"] = "sensor";
  j["t"] = frame.t_s;
  j["v"] = frame.body_velocity_mps;
  j["enc"] = frame.encoder_ticks;
  j["ins"] = {{"p", {frame.ins.position.x(), frame.ins.position.y(), frame.ins.position.z()}},
              {"q",
               {frame.ins.orientation.w(), frame.ins.orientation.x(),
                frame.ins.orientation.y(), frame.ins.orientation.z()}}};
  j["obstacle"] = {{"range", frame.obstacle_range_m},
                   {"class", frame.obstacle_class},
                   {"height", frame.obstacle_height_m}};
  j["target_speed"] = frame.target_speed_mps;
  j["lidar"] = {{"n", frame.lidar_point_count}, {"min_range", frame.lidar_min_range_m}};
  j["conditions"] = {{"time", scenario::to_string(conditions.time_of_day)},
                     {"weather", scenario::to_string(conditions.weather)},
                     {"ambient_light", conditions.ambient_light},
                     {"visibility", conditions.visibility_m},
                     {"traction", conditions.traction_scale},
                     {"fog", conditions.fog_present}};
  return j.dump();
}

sut::SensorFrame parse_sensor_frame_line(const std::string& line,
                                         scenario::Conditions* conditions_out) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(std::string("bad sensor record: ") + e.what());
  }
  sut::SensorFrame f;
  f.t_s = j.at("t").get<double>();
  f.body_velocity_mps = j.at("v").get<double>();
  const auto& enc = j.at("enc");
  for (std::size_t i = 0; i < 4; ++i) f.encoder_ticks[i] = enc.at(i).get<std::int64_t>();
  const auto& ins = j.at("ins");
  f.ins.position = Vec3(ins.at("p").at(0).get<double>(), ins.at("p").at(1).get<double>(),
                        ins.at("p").at(2).get<double>());
  f.ins.orientation = Eigen::Quaterniond(
      ins.at("q").at(0).get<double>(), ins.at("q").at(1).get<double>(),
      ins.at("q").at(2).get<double>(), ins.at("q").at(3).get<double>());
  const auto& obs = j.at("obstacle");
  f.obstacle_range_m = obs.at("range").get<double>();
  f.obstacle_class = obs.at("class").get<std::string>();
  f.obstacle_height_m = obs.at("height").get<double>();
  f.target_speed_mps = j.at("target_speed").get<double>();
  f.lidar_point_count = j.at("lidar").at("n").get<int>();
  f.lidar_min_range_m = j.at("lidar").at("min_range").get<double>();
  if (conditions_out != nullptr) {
    const auto& c = j.at("conditions");
    conditions_out->time_of_day =
        scenario::time_of_day_from_string(c.at("time").get<std::string>());
    conditions_out->weather = scenario::weather_from_string(c.at("weather").get<std::string>());
    conditions_out->ambient_light = c.at("ambient_light").get<double>();
    conditions_out->visibility_m = c.at("visibility").get<double>();
    conditions_out->traction_scale = c.at("traction").get<double>();
    conditions_out->fog_present = c.at("fog").get<bool>();
  }
  return f;
}

std::string control_line(const dynamics::ControlInput& control, int aeb_trigger) {
  json j;
  j["type"] = "control";
  j["throttle"] = control.throttle;
  j["steering"] = control.steering_cmd_rad;
  j["brake"] = control.brake;
  j["handbrake"] = control.handbrake ? 1 : 0;
  j["lights"] = dynamics::to_string(control.lights);
  j["aeb"] = aeb_trigger;
  return j.dump();
}

dynamics::ControlInput parse_control_line(const std::string& line, int* aeb_out) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(std::string("bad control record: ") + e.what());
  }
  dynamics::ControlInput c;
  c.throttle = j.at("throttle").get<double>();
  c.steering_cmd_rad = j.at("steering").get<double>();
  c.brake = j.at("brake").get<double>();
  c.handbrake = j.at("handbrake").get<int>() != 0;
  c.lights = dynamics::lights_from_string(j.at("lights").get<std::string>());
  if (aeb_out != nullptr) {
    if (j.contains("aeb")) {
      *aeb_out = j.at("aeb").get<int>();
    } else {
      *aeb_out = (c.brake >= 0.999 && c.throttle <= 0.001) ? 1 : 0;
    }
  }
  return c;
}

}  // namespace vpg::io
