#include "vpg/orchestrator/trace.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "vpg/common/errors.hpp"
#include "json_util.hpp"

namespace vpg::orchestrator {

using nlohmann::json;

std::string trace_header_line(const TraceHeader& h) {
  json j;
  j["type"] = "header";
  j["schema"] = h.schema_version;
  j["campaign"] = h.campaign;
  j["case_id"] = h.case_id;
  j["sut"] = h.sut;
  j["seed"] = h.seed;
  j["dt"] = h.dt_s;
  j["fos"] = h.fos_m;
  j["conditions"] = detail::conditions_to_json(h.conditions);
  j["scene"] = detail::scene_to_json(h.scene);
  j["body"] = {{"length", h.body_length_m}, {"width", h.body_width_m}, {"height", h.body_height_m}};
  j["target_speed"] = h.target_speed_mps;
  return j.dump();
}

std::string trace_tick_line(const TraceTick& t) {
  json j;
  j["type"] = "tick";
  j["tick"] = t.tick;
  j["t"] = t.t_s;
  j["state"] = {{"x", t.x},       {"y", t.y},     {"z", t.z},
                {"yaw", t.yaw},   {"v", t.v_mps}, {"rpm", t.engine_rpm},
                {"gear", t.gear}, {"steer", t.steering_rad}};
  j["sensors"] = {{"enc", t.encoder_ticks}, {"lidar_n", t.lidar_point_count}};
  json dets = json::array();
  for (const auto& d : t.detections) {
    dets.push_back({{"class", d.class_tag},
                    {"confidence", d.confidence},
                    {"bbox", d.bbox_height_frac},
                    {"range", d.range_m}});
  }
  j["detections"] = dets;
  j["control"] = {{"throttle", t.control.throttle},
                  {"steering", t.control.steering_cmd_rad},
                  {"brake", t.control.brake},
                  {"handbrake", t.control.handbrake ? 1 : 0},
                  {"lights", dynamics::to_string(t.control.lights)}};
  j["aeb"] = t.aeb_trigger;
  j["kpi"] = {{"dtc", t.dtc_m}, {"collisions", t.collision_count}};
  return j.dump();
}

TraceHeader parse_trace_header(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(std::string("trace header: ") + e.what());
  }
  if (j.value("type", "") != "header") throw Error("trace does not start with a header record");
  TraceHeader h;
  h.schema_version = j.at("schema").get<int>();
  if (h.schema_version != kTraceSchemaVersion) {
    throw Error("unsupported trace schema version " + std::to_string(h.schema_version));
  }
  h.campaign = j.at("campaign").get<std::string>();
  h.case_id = j.at("case_id").get<int>();
  h.sut = j.at("sut").get<std::string>();
  h.seed = j.at("seed").get<std::int64_t>();
  h.dt_s = j.at("dt").get<double>();
  h.fos_m = j.at("fos").get<double>();
  h.conditions = detail::conditions_from_json(j.at("conditions"));
  h.scene = detail::scene_from_json(j.at("scene"));
  h.body_length_m = j.at("body").at("length").get<double>();
  h.body_width_m = j.at("body").at("width").get<double>();
  h.body_height_m = j.at("body").at("height").get<double>();
  h.target_speed_mps = j.at("target_speed").get<double>();
  return h;
}

TraceTick parse_trace_tick(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(std::string("trace tick: ") + e.what());
  }
  if (j.value("type", "") != "tick") throw Error("expected a tick record");
  TraceTick t;
  t.tick = j.at("tick").get<int>();
  t.t_s = j.at("t").get<double>();
  const auto& s = j.at("state");
  t.x = s.at("x").get<double>();
  t.y = s.at("y").get<double>();
  t.z = s.at("z").get<double>();
  t.yaw = s.at("yaw").get<double>();
  t.v_mps = s.at("v").get<double>();
  t.engine_rpm = s.at("rpm").get<double>();
  t.gear = s.at("gear").get<int>();
  t.steering_rad = s.at("steer").get<double>();
  const auto& enc = j.at("sensors").at("enc");
  for (std::size_t i = 0; i < 4; ++i) t.encoder_ticks[i] = enc.at(i).get<std::int64_t>();
  t.lidar_point_count = j.at("sensors").at("lidar_n").get<int>();
  for (const auto& dj : j.at("detections")) {
    sut::Detection d;
    d.class_tag = dj.at("class").get<std::string>();
    d.confidence = dj.at("confidence").get<double>();
    d.bbox_height_frac = dj.at("bbox").get<double>();
    d.range_m = dj.at("range").get<double>();
    t.detections.push_back(std::move(d));
  }
  const auto& c = j.at("control");
  t.control.throttle = c.at("throttle").get<double>();
  t.control.steering_cmd_rad = c.at("steering").get<double>();
  t.control.brake = c.at("brake").get<double>();
  t.control.handbrake = c.at("handbrake").get<int>() != 0;
  t.control.lights = dynamics::lights_from_string(c.at("lights").get<std::string>());
  t.aeb_trigger = j.at("aeb").get<int>();
  t.dtc_m = j.at("kpi").at("dtc").get<double>();
  t.collision_count = j.at("kpi").at("collisions").get<int>();
  return t;
}

Obb ego_box_from_tick(const TraceTick& tick, double length_m, double width_m,
                      double height_m) {
  const Pose pose = make_pose(Vec3(tick.x, tick.y, tick.z), tick.yaw);
  return kpi::ego_bounding_box(pose, length_m, width_m, height_m);
}

kpi::KpiRecord kpi_row_from_tick(const TraceTick& tick) {
  kpi::KpiRecord r;
  r.t_s = tick.t_s;
  r.aeb_trigger = tick.aeb_trigger;
  r.dtc_m = tick.dtc_m;
  r.collision_count = tick.collision_count;
  r.throttle = tick.control.throttle;
  r.brake = tick.control.brake;
  r.speed_mps = tick.v_mps;
  r.lights = tick.control.lights;
  return r;
}

ReplayResult replay(const std::filesystem::path& trace_path) {
  std::ifstream in(trace_path);
  if (!in) throw Error("cannot open trace file: " + trace_path.string());

  ReplayResult out;
  std::string line;
  int line_no = 0;

  if (!std::getline(in, line)) throw Error("trace is empty: " + trace_path.string());
  ++line_no;
  try {
    out.header = parse_trace_header(line);
  } catch (const Error& e) {
    throw Error("trace line 1: " + std::string(e.what()));
  }

  kpi::CollisionTracker tracker(out.header.scene);
  out.kpi_csv = kpi::kpi_csv_header() + "\n";
  int expected_tick = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    TraceTick tick;
    try {
      tick = parse_trace_tick(line);
    } catch (const Error& e) {
      throw Error("trace line " + std::to_string(line_no) + ": " + std::string(e.what()));
    }
    if (tick.tick != expected_tick) {
      throw Error("trace line " + std::to_string(line_no) + ": missing or out-of-order tick (expected " +
                  std::to_string(expected_tick) + ", found " + std::to_string(tick.tick) + ")");
    }
    ++expected_tick;

    // Recompute the geometric KPIs from the stored pose; control and trigger
    // channels come from the record.
    const Obb ego = ego_box_from_tick(tick, out.header.body_length_m,
                                      out.header.body_width_m, out.header.body_height_m);
    TraceTick recomputed = tick;
    recomputed.dtc_m = kpi::distance_to_collision(ego, out.header.scene);
    recomputed.collision_count = tracker.update(ego, out.header.scene);

    const kpi::KpiRecord row = kpi_row_from_tick(recomputed);
    out.records.push_back(row);
    out.kpi_csv += kpi::kpi_csv_row(row) + "\n";
  }
  if (out.records.empty()) {
    throw Error("trace has no tick records: " + trace_path.string());
  }
  out.verdict = kpi::verdict(out.records, out.header.fos_m);
  out.verdict.case_id = out.header.case_id;
  out.verdict.sut = out.header.sut;
  return out;
}

}  // namespace vpg::orchestrator
