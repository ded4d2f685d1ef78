#include "vpg/orchestrator/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vpg/common/errors.hpp"
#include "json_util.hpp"

namespace vpg::orchestrator {

using nlohmann::json;

namespace detail {

json scene_to_json(const scenario::Scene& scene) {
  json j;
  j["name"] = scene.name;
  j["lane"] = {{"heading", scene.lane.heading_rad},
               {"length", scene.lane.length_m},
               {"target_speed", scene.lane.target_speed_mps}};
  const Vec3 spawn = scene.ego_spawn.translation();
  j["ego_spawn"] = {{"position", {spawn.x(), spawn.y(), spawn.z()}},
                    {"yaw", yaw_of(scene.ego_spawn)}};
  j["obstacles"] = json::array();
  for (const auto& o : scene.obstacles) {
    const Vec3 p = o.pose.translation();
    j["obstacles"].push_back({{"tag", o.tag},
                              {"shape", scenario::to_string(o.kind)},
                              {"position", {p.x(), p.y(), p.z()}},
                              {"yaw", yaw_of(o.pose)},
                              {"dimensions", {o.dimensions.x(), o.dimensions.y(), o.dimensions.z()}},
                              {"ground", o.is_ground}});
  }
  return j;
}

scenario::Scene scene_from_json(const json& j) {
  scenario::Scene scene;
  scene.name = j.value("name", "custom");
  if (j.contains("lane")) {
    const auto& l = j.at("lane");
    scene.lane.heading_rad = l.value("heading", 0.0);
    scene.lane.length_m = l.value("length", 500.0);
    scene.lane.target_speed_mps = l.value("target_speed", 15.0);
  }
  if (j.contains("ego_spawn")) {
    const auto& e = j.at("ego_spawn");
    const auto& p = e.at("position");
    scene.ego_spawn = make_pose(
        Vec3(p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()),
        e.value("yaw", 0.0));
  }
  for (const auto& oj : j.at("obstacles")) {
    scenario::Obstacle o;
    o.tag = oj.at("tag").get<std::string>();
    o.kind = scenario::shape_kind_from_string(oj.at("shape").get<std::string>());
    const auto& p = oj.at("position");
    o.pose = make_pose(
        Vec3(p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()),
        oj.value("yaw", 0.0));
    if (oj.contains("dimensions")) {
      const auto& d = oj.at("dimensions");
      o.dimensions =
          Vec3(d.at(0).get<double>(), d.at(1).get<double>(), d.at(2).get<double>());
    }
    o.is_ground = oj.value("ground", false);
    scene.obstacles.push_back(std::move(o));
  }
  scene.validate();
  return scene;
}

json conditions_to_json(const scenario::Conditions& c) {
  return {{"time", scenario::to_string(c.time_of_day)},
          {"weather", scenario::to_string(c.weather)},
          {"ambient_light", c.ambient_light},
          {"visibility", c.visibility_m},
          {"traction", c.traction_scale},
          {"fog", c.fog_present}};
}

scenario::Conditions conditions_from_json(const json& j) {
  scenario::Conditions c;
  c.time_of_day = scenario::time_of_day_from_string(j.at("time").get<std::string>());
  c.weather = scenario::weather_from_string(j.at("weather").get<std::string>());
  c.ambient_light = j.at("ambient_light").get<double>();
  c.visibility_m = j.at("visibility").get<double>();
  c.traction_scale = j.at("traction").get<double>();
  c.fog_present = j.at("fog").get<bool>();
  return c;
}

}  // namespace detail

namespace {

/// Rejects keys outside the allowed set, naming the first offender.
void check_keys(const json& obj, const std::string& section,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (allowed.count(key) == 0) {
      throw ConfigError("unknown key '" + key + "' in section '" + section + "'");
    }
  }
}

void require_object(const json& obj, const std::string& section) {
  if (!obj.is_object()) throw ConfigError("section '" + section + "' must be an object");
}

double get_num(const json& obj, const std::string& section, const std::string& key) {
  if (!obj.at(key).is_number()) {
    throw ConfigError("key '" + section + "." + key + "' must be a number");
  }
  return obj.at(key).get<double>();
}

/// Collects every missing key before reporting, so the error names them all.
class RequiredKeys {
 public:
  RequiredKeys(const json& obj, std::string section) : obj_(obj), section_(std::move(section)) {}

  bool has(const std::string& key) {
    if (!obj_.contains(key)) {
      missing_.push_back(key);
      return false;
    }
    return true;
  }

  void finish() const {
    if (missing_.empty()) return;
    std::string msg = "section '" + section_ + "' is missing required keys: ";
    for (std::size_t i = 0; i < missing_.size(); ++i) {
      if (i > 0) msg += ", ";
      msg += missing_[i];
    }
    throw ConfigError(msg);
  }

 private:
  const json& obj_;
  std::string section_;
  std::vector<std::string> missing_;
};

dynamics::Drivetrain drivetrain_from_string(const std::string& s) {
  if (s == "FWD") return dynamics::Drivetrain::kFwd;
  if (s == "RWD") return dynamics::Drivetrain::kRwd;
  if (s == "AWD") return dynamics::Drivetrain::kAwd;
  throw ConfigError("unknown drivetrain '" + s + "' (expected FWD, RWD, or AWD)");
}

std::string drivetrain_to_string(dynamics::Drivetrain d) {
  switch (d) {
    case dynamics::Drivetrain::kFwd: return "FWD";
    case dynamics::Drivetrain::kRwd: return "RWD";
    case dynamics::Drivetrain::kAwd: return "AWD";
  }
  return "FWD";
}

dynamics::SplineControlPoints parse_spline_points(const json& j, const std::string& section) {
  require_object(j, section);
  check_keys(j, section, {"origin", "extremum", "asymptote"});
  RequiredKeys req(j, section);
  dynamics::SplineControlPoints pts;
  if (req.has("origin")) {
    pts.s0 = j.at("origin").at(0).get<double>();
    pts.f0 = j.at("origin").at(1).get<double>();
  }
  if (req.has("extremum")) {
    pts.se = j.at("extremum").at(0).get<double>();
    pts.fe = j.at("extremum").at(1).get<double>();
  }
  if (req.has("asymptote")) {
    pts.sa = j.at("asymptote").at(0).get<double>();
    pts.fa = j.at("asymptote").at(1).get<double>();
  }
  req.finish();
  return pts;
}

dynamics::VehicleParams parse_vehicle(const json& j) {
  require_object(j, "vehicle");
  check_keys(j, "vehicle",
             {"corners", "wheelbase", "track_width", "tire_radius", "brake_disk_radius",
              "braking_distance", "engine_torque_curve", "forward_gear_ratios",
              "reverse_gear_ratio", "final_drive_ratio", "idle_rpm", "drivetrain",
              "torque_drop", "steer_sensitivity", "steer_speed_factor", "max_steer",
              "v_max", "v_rev", "drag", "tire_long", "tire_lat", "shift_up_rpm",
              "shift_down_rpm", "body"});
  RequiredKeys req(j, "vehicle");
  dynamics::VehicleParams p;

  if (req.has("corners")) {
    const auto& corners = j.at("corners");
    if (!corners.is_array() || corners.size() != 4) {
      throw ConfigError("vehicle.corners must be an array of 4 corner objects");
    }
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& c = corners.at(i);
      const std::string section = "vehicle.corners[" + std::to_string(i) + "]";
      require_object(c, section);
      check_keys(c, section,
                 {"sprung_mass", "wheel_mass", "natural_frequency", "damping_ratio",
                  "mount_position"});
      RequiredKeys creq(c, section);
      auto& corner = p.corners[i];
      if (creq.has("sprung_mass")) corner.sprung_mass_kg = get_num(c, section, "sprung_mass");
      if (creq.has("wheel_mass")) corner.wheel_mass_kg = get_num(c, section, "wheel_mass");
      if (creq.has("natural_frequency")) {
        corner.natural_frequency_rad_s = get_num(c, section, "natural_frequency");
      }
      if (creq.has("damping_ratio")) corner.damping_ratio = get_num(c, section, "damping_ratio");
      if (creq.has("mount_position")) {
        const auto& m = c.at("mount_position");
        corner.mount_position_m =
            Vec3(m.at(0).get<double>(), m.at(1).get<double>(), m.at(2).get<double>());
      }
      creq.finish();
    }
  }

  if (req.has("wheelbase")) p.wheelbase_m = get_num(j, "vehicle", "wheelbase");
  if (req.has("track_width")) p.track_width_m = get_num(j, "vehicle", "track_width");
  if (req.has("tire_radius")) p.tire_radius_m = get_num(j, "vehicle", "tire_radius");
  if (req.has("brake_disk_radius")) {
    p.brake_disk_radius_m = get_num(j, "vehicle", "brake_disk_radius");
  }
  if (req.has("braking_distance")) p.braking_distance_m = get_num(j, "vehicle", "braking_distance");
  if (req.has("engine_torque_curve")) {
    p.engine_torque_curve.clear();
    for (const auto& pt : j.at("engine_torque_curve")) {
      p.engine_torque_curve.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
    }
  }
  if (req.has("forward_gear_ratios")) {
    p.forward_gear_ratios = j.at("forward_gear_ratios").get<std::vector<double>>();
  }
  if (req.has("reverse_gear_ratio")) p.reverse_gear_ratio = get_num(j, "vehicle", "reverse_gear_ratio");
  if (req.has("final_drive_ratio")) p.final_drive_ratio = get_num(j, "vehicle", "final_drive_ratio");
  if (req.has("idle_rpm")) p.idle_rpm = get_num(j, "vehicle", "idle_rpm");
  if (req.has("drivetrain")) {
    p.drivetrain = drivetrain_from_string(j.at("drivetrain").get<std::string>());
  }
  if (req.has("torque_drop")) p.torque_drop = get_num(j, "vehicle", "torque_drop");
  if (req.has("steer_sensitivity")) p.steer_sensitivity_rad_s = get_num(j, "vehicle", "steer_sensitivity");
  if (req.has("steer_speed_factor")) {
    p.steer_speed_factor_rad_s = get_num(j, "vehicle", "steer_speed_factor");
  }
  if (req.has("max_steer")) p.max_steer_rad = get_num(j, "vehicle", "max_steer");
  if (req.has("v_max")) p.v_max_mps = get_num(j, "vehicle", "v_max");
  if (req.has("v_rev")) p.v_rev_mps = get_num(j, "vehicle", "v_rev");
  if (req.has("drag")) {
    const auto& d = j.at("drag");
    check_keys(d, "vehicle.drag", {"max", "idle", "rev", "run"});
    RequiredKeys dreq(d, "vehicle.drag");
    if (dreq.has("max")) p.drag.max_n = get_num(d, "vehicle.drag", "max");
    if (dreq.has("idle")) p.drag.idle_n = get_num(d, "vehicle.drag", "idle");
    if (dreq.has("rev")) p.drag.rev_n = get_num(d, "vehicle.drag", "rev");
    if (dreq.has("run")) p.drag.run_n = get_num(d, "vehicle.drag", "run");
    dreq.finish();
  }
  if (req.has("tire_long")) p.tire_long = parse_spline_points(j.at("tire_long"), "vehicle.tire_long");
  if (req.has("tire_lat")) p.tire_lat = parse_spline_points(j.at("tire_lat"), "vehicle.tire_lat");
  if (req.has("shift_up_rpm")) p.shift_up_rpm = get_num(j, "vehicle", "shift_up_rpm");
  if (req.has("shift_down_rpm")) p.shift_down_rpm = get_num(j, "vehicle", "shift_down_rpm");
  if (req.has("body")) {
    const auto& b = j.at("body");
    check_keys(b, "vehicle.body", {"length", "width", "height"});
    RequiredKeys breq(b, "vehicle.body");
    if (breq.has("length")) p.body_length_m = get_num(b, "vehicle.body", "length");
    if (breq.has("width")) p.body_width_m = get_num(b, "vehicle.body", "width");
    if (breq.has("height")) p.body_height_m = get_num(b, "vehicle.body", "height");
    breq.finish();
  }
  req.finish();
  p.validate();
  return p;
}

sensors::NoiseModel parse_noise(const json& j, const std::string& section) {
  check_keys(j, section, {"std_dev", "bias", "enabled", "compensate", "seed"});
  sensors::NoiseModel n;
  n.std_dev = j.value("std_dev", 0.0);
  n.bias = j.value("bias", 0.0);
  n.enabled = j.value("enabled", false);
  n.compensate = j.value("compensate", false);
  n.seed = j.value("seed", 0ULL);
  if (n.std_dev < 0.0) throw ConfigError(section + ".std_dev must be >= 0");
  return n;
}

SensorSuiteConfig parse_sensors(const json& j) {
  SensorSuiteConfig s;
  check_keys(j, "sensors", {"ins", "encoder", "camera", "lidar"});
  if (j.contains("ins")) {
    const auto& ins = j.at("ins");
    check_keys(ins, "sensors.ins", {"position_noise", "velocity_noise", "angular_rate_noise"});
    if (ins.contains("position_noise")) {
      s.ins_noise.position = parse_noise(ins.at("position_noise"), "sensors.ins.position_noise");
    }
    if (ins.contains("velocity_noise")) {
      s.ins_noise.velocity = parse_noise(ins.at("velocity_noise"), "sensors.ins.velocity_noise");
    }
    if (ins.contains("angular_rate_noise")) {
      s.ins_noise.angular_rate =
          parse_noise(ins.at("angular_rate_noise"), "sensors.ins.angular_rate_noise");
    }
  }
  if (j.contains("encoder")) {
    const auto& e = j.at("encoder");
    check_keys(e, "sensors.encoder", {"ppr", "cgr"});
    s.encoder.pulses_per_rev = e.value("ppr", s.encoder.pulses_per_rev);
    s.encoder.cumulative_gear_ratio = e.value("cgr", s.encoder.cumulative_gear_ratio);
    s.encoder.validate();
  }
  if (j.contains("camera")) {
    const auto& c = j.at("camera");
    check_keys(c, "sensors.camera",
               {"near", "far", "left", "right", "top", "bottom", "width", "height"});
    s.camera.near_m = c.value("near", s.camera.near_m);
    s.camera.far_m = c.value("far", s.camera.far_m);
    s.camera.left_m = c.value("left", s.camera.left_m);
    s.camera.right_m = c.value("right", s.camera.right_m);
    s.camera.top_m = c.value("top", s.camera.top_m);
    s.camera.bottom_m = c.value("bottom", s.camera.bottom_m);
    s.camera.image_width_px = c.value("width", s.camera.image_width_px);
    s.camera.image_height_px = c.value("height", s.camera.image_height_px);
    s.camera.validate();
  }
  if (j.contains("lidar")) {
    const auto& l = j.at("lidar");
    check_keys(l, "sensors.lidar",
               {"enabled", "mount_position", "r_min", "r_max", "theta_min", "theta_max",
                "theta_res", "phi_min", "phi_max", "phi_res", "update_rate", "range_noise",
                "threads"});
    s.lidar_enabled = l.value("enabled", false);
    if (l.contains("mount_position")) {
      const auto& m = l.at("mount_position");
      s.lidar.mount = make_pose(
          Vec3(m.at(0).get<double>(), m.at(1).get<double>(), m.at(2).get<double>()), 0.0);
    }
    s.lidar.r_min_m = l.value("r_min", s.lidar.r_min_m);
    s.lidar.r_max_m = l.value("r_max", s.lidar.r_max_m);
    s.lidar.theta_min_rad = l.value("theta_min", s.lidar.theta_min_rad);
    s.lidar.theta_max_rad = l.value("theta_max", s.lidar.theta_max_rad);
    s.lidar.theta_res_rad = l.value("theta_res", s.lidar.theta_res_rad);
    s.lidar.phi_min_rad = l.value("phi_min", s.lidar.phi_min_rad);
    s.lidar.phi_max_rad = l.value("phi_max", s.lidar.phi_max_rad);
    s.lidar.phi_res_rad = l.value("phi_res", s.lidar.phi_res_rad);
    s.lidar.update_rate_hz = l.value("update_rate", s.lidar.update_rate_hz);
    if (l.contains("range_noise")) {
      s.lidar_noise = parse_noise(l.at("range_noise"), "sensors.lidar.range_noise");
    }
    s.lidar_threads = l.value("threads", 1);
    if (s.lidar_enabled) s.lidar.validate();
  }
  return s;
}

scenario::ConditionTables parse_tables(const json& j) {
  scenario::ConditionTables t;
  check_keys(j, "condition_tables",
             {"light_by_time", "light_attenuation", "visibility", "traction"});
  auto read8 = [&](const char* key, std::array<double, 8>& out) {
    if (!j.contains(key)) return;
    const auto& arr = j.at(key);
    if (!arr.is_array() || arr.size() != 8) {
      throw ConfigError(std::string("condition_tables.") + key + " must hold 8 numbers");
    }
    for (std::size_t i = 0; i < 8; ++i) out[i] = arr.at(i).get<double>();
  };
  read8("light_by_time", t.light_by_time);
  read8("light_attenuation", t.light_attenuation);
  read8("visibility", t.visibility_m);
  read8("traction", t.traction);
  return t;
}

scenario::TestMatrix parse_matrix(const json& j) {
  require_object(j, "matrix");
  check_keys(j, "matrix", {"suts", "times", "weathers", "batch_size", "base_seed"});
  RequiredKeys req(j, "matrix");
  scenario::TestMatrix m;
  if (req.has("suts")) m.sut_variants = j.at("suts").get<std::vector<std::string>>();
  if (req.has("times")) {
    for (const auto& t : j.at("times")) {
      m.times.push_back(scenario::time_of_day_from_string(t.get<std::string>()));
    }
  }
  if (req.has("weathers")) {
    for (const auto& w : j.at("weathers")) {
      m.weathers.push_back(scenario::weather_from_string(w.get<std::string>()));
    }
  }
  req.finish();
  m.batch_size = j.value("batch_size", 32);
  m.base_seed = j.value("base_seed", 0LL);
  m.validate();
  return m;
}

SutConfig parse_sut(const json& j) {
  SutConfig s;
  // Shipped defaults mirror the four perception variants of the case study.
  auto make_profile = [](const std::string& name, double range, double slope, double miss,
                         double bbox, int latency) {
    sut::DetectorProfile p;
    p.name = name;
    p.max_detect_range_m = range;
    p.confidence_slope = slope;
    p.miss_rate_base = miss;
    p.min_bbox_frac = bbox;
    p.latency_ticks = latency;
    return SutVariantConfig{p, {}};
  };
  s.profiles["det-A"] = make_profile("det-A", 250.0, 1.0, 0.02, 0.008, 2);
  s.profiles["det-B"] = make_profile("det-B", 110.0, 0.65, 0.30, 0.015, 8);
  s.profiles["det-C"] = make_profile("det-C", 220.0, 0.95, 0.05, 0.009, 3);
  s.profiles["det-D"] = make_profile("det-D", 130.0, 0.85, 0.15, 0.012, 5);

  check_keys(j, "sut", {"profiles", "planner", "controller", "lighting"});
  if (j.contains("profiles")) {
    for (const auto& [name, pj] : j.at("profiles").items()) {
      const std::string section = "sut.profiles." + name;
      check_keys(pj, section,
                 {"max_detect_range", "confidence_slope", "miss_rate_base", "min_bbox_frac",
                  "latency_ticks", "command"});
      SutVariantConfig v;
      auto existing = s.profiles.find(name);
      if (existing != s.profiles.end()) v = existing->second;
      v.profile.name = name;
      v.profile.max_detect_range_m = pj.value("max_detect_range", v.profile.max_detect_range_m);
      v.profile.confidence_slope = pj.value("confidence_slope", v.profile.confidence_slope);
      v.profile.miss_rate_base = pj.value("miss_rate_base", v.profile.miss_rate_base);
      v.profile.min_bbox_frac = pj.value("min_bbox_frac", v.profile.min_bbox_frac);
      v.profile.latency_ticks = pj.value("latency_ticks", v.profile.latency_ticks);
      if (pj.contains("command")) v.command = pj.at("command").get<std::vector<std::string>>();
      v.profile.validate();
      s.profiles[name] = std::move(v);
    }
  }
  if (j.contains("planner")) {
    const auto& p = j.at("planner");
    check_keys(p, "sut.planner", {"trigger_classes", "min_confidence", "min_bbox_frac", "latch"});
    if (p.contains("trigger_classes")) {
      s.planner.trigger_classes.clear();
      for (const auto& c : p.at("trigger_classes")) {
        s.planner.trigger_classes.insert(c.get<std::string>());
      }
    }
    s.planner.min_confidence = p.value("min_confidence", s.planner.min_confidence);
    s.planner.min_bbox_frac = p.value("min_bbox_frac", s.planner.min_bbox_frac);
    s.planner.latch = p.value("latch", s.planner.latch);
  }
  if (j.contains("controller")) {
    const auto& c = j.at("controller");
    check_keys(c, "sut.controller", {"kp"});
    s.controller.kp = c.value("kp", s.controller.kp);
  }
  if (j.contains("lighting")) {
    const auto& l = j.at("lighting");
    check_keys(l, "sut.lighting", {"high_beam_below", "low_beam_below"});
    s.lighting.high_beam_below = l.value("high_beam_below", s.lighting.high_beam_below);
    s.lighting.low_beam_below = l.value("low_beam_below", s.lighting.low_beam_below);
  }
  return s;
}

HpcConfig parse_hpc(const json& j) {
  HpcConfig h;
  check_keys(j, "hpc", {"job_name", "cpus_per_task", "mem_gb", "walltime", "queue"});
  h.job_name = j.value("job_name", h.job_name);
  h.cpus_per_task = j.value("cpus_per_task", h.cpus_per_task);
  h.mem_gb = j.value("mem_gb", h.mem_gb);
  h.walltime = j.value("walltime", h.walltime);
  h.queue = j.value("queue", h.queue);
  return h;
}

}  // namespace

void CampaignConfig::validate() const {
  if (campaign.name.empty()) throw ConfigError("campaign.name must not be empty");
  if (campaign.worker_count < 1) throw ConfigError("campaign.worker_count must be >= 1");
  if (campaign.dt_s <= 0.0) throw ConfigError("campaign.dt must be > 0");
  if (campaign.tick_budget_s <= 0.0) throw ConfigError("campaign.tick_budget must be > 0");
  if (campaign.resource_sample_hz <= 0.0) {
    throw ConfigError("campaign.resource_sample_hz must be > 0");
  }
  matrix.validate();
  for (const auto& sut_name : matrix.sut_variants) {
    if (sut.profiles.count(sut_name) == 0) {
      throw ConfigError("matrix references unknown SUT profile '" + sut_name + "'");
    }
  }
  scene.validate();
  vehicle.validate();
}

CampaignConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

CampaignConfig parse_config(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports byte offsets; recover the line number for the message.
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ConfigError(origin + ": parse error at line " + std::to_string(line) + ": " +
                      e.what());
  }
  require_object(root, "<root>");
  check_keys(root, "<root>",
             {"campaign", "vehicle", "sensors", "scene", "condition_tables", "matrix", "sut",
              "stream", "hpc"});
  RequiredKeys req(root, "<root>");
  CampaignConfig cfg;

  if (req.has("campaign")) {
    const auto& c = root.at("campaign");
    require_object(c, "campaign");
    check_keys(c, "campaign",
               {"name", "fos", "dt", "tick_budget", "stop_after_stationary",
                "stop_after_collision", "worker_count", "case_timeout",
                "resource_sample_hz", "cross_batch_parallel"});
    RequiredKeys creq(c, "campaign");
    if (creq.has("name")) cfg.campaign.name = c.at("name").get<std::string>();
    creq.finish();
    cfg.campaign.fos_m = c.value("fos", cfg.campaign.fos_m);
    cfg.campaign.dt_s = c.value("dt", cfg.campaign.dt_s);
    cfg.campaign.tick_budget_s = c.value("tick_budget", cfg.campaign.tick_budget_s);
    cfg.campaign.stop_after_stationary_s =
        c.value("stop_after_stationary", cfg.campaign.stop_after_stationary_s);
    cfg.campaign.stop_after_collision_s =
        c.value("stop_after_collision", cfg.campaign.stop_after_collision_s);
    cfg.campaign.worker_count = c.value("worker_count", cfg.campaign.worker_count);
    cfg.campaign.case_timeout_s = c.value("case_timeout", cfg.campaign.case_timeout_s);
    cfg.campaign.resource_sample_hz =
        c.value("resource_sample_hz", cfg.campaign.resource_sample_hz);
    cfg.campaign.cross_batch_parallel =
        c.value("cross_batch_parallel", cfg.campaign.cross_batch_parallel);
  }

  if (req.has("vehicle")) cfg.vehicle = parse_vehicle(root.at("vehicle"));

  if (root.contains("sensors")) cfg.sensors = parse_sensors(root.at("sensors"));

  if (root.contains("scene")) {
    const auto& s = root.at("scene");
    require_object(s, "scene");
    check_keys(s, "scene", {"name", "lane", "ego_spawn", "obstacles", "target_speed"});
    if (s.contains("obstacles")) {
      cfg.scene = detail::scene_from_json(s);
    } else if (s.contains("name")) {
      cfg.scene = scenario::build_scene(s.at("name").get<std::string>());
    } else {
      throw ConfigError("scene: provide either 'name' or inline 'obstacles'");
    }
    if (s.contains("target_speed")) {
      cfg.scene.lane.target_speed_mps = s.at("target_speed").get<double>();
    }
  } else {
    cfg.scene = scenario::build_scene("aeb_jumpscare");
  }

  if (root.contains("condition_tables")) cfg.tables = parse_tables(root.at("condition_tables"));

  if (req.has("matrix")) cfg.matrix = parse_matrix(root.at("matrix"));

  if (root.contains("sut")) {
    cfg.sut = parse_sut(root.at("sut"));
  } else {
    cfg.sut = parse_sut(json::object());
  }

  if (root.contains("stream")) {
    const auto& s = root.at("stream");
    check_keys(s, "stream", {"bind"});
    cfg.stream_bind = s.value("bind", cfg.stream_bind);
  }

  if (root.contains("hpc")) {
    cfg.hpc = parse_hpc(root.at("hpc"));
  }

  req.finish();
  cfg.validate();
  return cfg;
}

std::string resolved_config_json(const CampaignConfig& cfg) {
  json j;
  j["campaign"] = {{"name", cfg.campaign.name},
                   {"fos", cfg.campaign.fos_m},
                   {"dt", cfg.campaign.dt_s},
                   {"tick_budget", cfg.campaign.tick_budget_s},
                   {"stop_after_stationary", cfg.campaign.stop_after_stationary_s},
                   {"stop_after_collision", cfg.campaign.stop_after_collision_s},
                   {"worker_count", cfg.campaign.worker_count},
                   {"case_timeout", cfg.campaign.case_timeout_s},
                   {"resource_sample_hz", cfg.campaign.resource_sample_hz},
                   {"cross_batch_parallel", cfg.campaign.cross_batch_parallel}};

  json corners = json::array();
  for (const auto& c : cfg.vehicle.corners) {
    corners.push_back({{"sprung_mass", c.sprung_mass_kg},
                       {"wheel_mass", c.wheel_mass_kg},
                       {"natural_frequency", c.natural_frequency_rad_s},
                       {"damping_ratio", c.damping_ratio},
                       {"mount_position",
                        {c.mount_position_m.x(), c.mount_position_m.y(), c.mount_position_m.z()}}});
  }
  json curve = json::array();
  for (const auto& [rpm, nm] : cfg.vehicle.engine_torque_curve) curve.push_back({rpm, nm});
  auto spline_json = [](const dynamics::SplineControlPoints& p) {
    return json{{"origin", {p.s0, p.f0}},
                {"extremum", {p.se, p.fe}},
                {"asymptote", {p.sa, p.fa}}};
  };
  j["vehicle"] = {{"corners", corners},
                  {"wheelbase", cfg.vehicle.wheelbase_m},
                  {"track_width", cfg.vehicle.track_width_m},
                  {"tire_radius", cfg.vehicle.tire_radius_m},
                  {"brake_disk_radius", cfg.vehicle.brake_disk_radius_m},
                  {"braking_distance", cfg.vehicle.braking_distance_m},
                  {"engine_torque_curve", curve},
                  {"forward_gear_ratios", cfg.vehicle.forward_gear_ratios},
                  {"reverse_gear_ratio", cfg.vehicle.reverse_gear_ratio},
                  {"final_drive_ratio", cfg.vehicle.final_drive_ratio},
                  {"idle_rpm", cfg.vehicle.idle_rpm},
                  {"drivetrain", drivetrain_to_string(cfg.vehicle.drivetrain)},
                  {"torque_drop", cfg.vehicle.torque_drop},
                  {"steer_sensitivity", cfg.vehicle.steer_sensitivity_rad_s},
                  {"steer_speed_factor", cfg.vehicle.steer_speed_factor_rad_s},
                  {"max_steer", cfg.vehicle.max_steer_rad},
                  {"v_max", cfg.vehicle.v_max_mps},
                  {"v_rev", cfg.vehicle.v_rev_mps},
                  {"drag",
                   {{"max", cfg.vehicle.drag.max_n},
                    {"idle", cfg.vehicle.drag.idle_n},
                    {"rev", cfg.vehicle.drag.rev_n},
                    {"run", cfg.vehicle.drag.run_n}}},
                  {"tire_long", spline_json(cfg.vehicle.tire_long)},
                  {"tire_lat", spline_json(cfg.vehicle.tire_lat)},
                  {"shift_up_rpm", cfg.vehicle.shift_up_rpm},
                  {"shift_down_rpm", cfg.vehicle.shift_down_rpm},
                  {"body",
                   {{"length", cfg.vehicle.body_length_m},
                    {"width", cfg.vehicle.body_width_m},
                    {"height", cfg.vehicle.body_height_m}}}};

  auto noise_json = [](const sensors::NoiseModel& n) {
    return json{{"std_dev", n.std_dev},
                {"bias", n.bias},
                {"enabled", n.enabled},
                {"compensate", n.compensate},
                {"seed", n.seed}};
  };
  const Vec3 mount = cfg.sensors.lidar.mount.translation();
  j["sensors"] = {
      {"ins",
       {{"position_noise", noise_json(cfg.sensors.ins_noise.position)},
        {"velocity_noise", noise_json(cfg.sensors.ins_noise.velocity)},
        {"angular_rate_noise", noise_json(cfg.sensors.ins_noise.angular_rate)}}},
      {"encoder",
       {{"ppr", cfg.sensors.encoder.pulses_per_rev},
        {"cgr", cfg.sensors.encoder.cumulative_gear_ratio}}},
      {"camera",
       {{"near", cfg.sensors.camera.near_m},
        {"far", cfg.sensors.camera.far_m},
        {"left", cfg.sensors.camera.left_m},
        {"right", cfg.sensors.camera.right_m},
        {"top", cfg.sensors.camera.top_m},
        {"bottom", cfg.sensors.camera.bottom_m},
        {"width", cfg.sensors.camera.image_width_px},
        {"height", cfg.sensors.camera.image_height_px}}},
      {"lidar",
       {{"enabled", cfg.sensors.lidar_enabled},
        {"mount_position", {mount.x(), mount.y(), mount.z()}},
        {"r_min", cfg.sensors.lidar.r_min_m},
        {"r_max", cfg.sensors.lidar.r_max_m},
        {"theta_min", cfg.sensors.lidar.theta_min_rad},
        {"theta_max", cfg.sensors.lidar.theta_max_rad},
        {"theta_res", cfg.sensors.lidar.theta_res_rad},
        {"phi_min", cfg.sensors.lidar.phi_min_rad},
        {"phi_max", cfg.sensors.lidar.phi_max_rad},
        {"phi_res", cfg.sensors.lidar.phi_res_rad},
        {"update_rate", cfg.sensors.lidar.update_rate_hz},
        {"range_noise", noise_json(cfg.sensors.lidar_noise)},
        {"threads", cfg.sensors.lidar_threads}}}};

  j["scene"] = detail::scene_to_json(cfg.scene);
  j["condition_tables"] = {{"light_by_time", cfg.tables.light_by_time},
                           {"light_attenuation", cfg.tables.light_attenuation},
                           {"visibility", cfg.tables.visibility_m},
                           {"traction", cfg.tables.traction}};

  json times = json::array(), weathers = json::array();
  for (auto t : cfg.matrix.times) times.push_back(scenario::to_string(t));
  for (auto w : cfg.matrix.weathers) weathers.push_back(scenario::to_string(w));
  j["matrix"] = {{"suts", cfg.matrix.sut_variants},
                 {"times", times},
                 {"weathers", weathers},
                 {"batch_size", cfg.matrix.batch_size},
                 {"base_seed", cfg.matrix.base_seed}};

  json profiles = json::object();
  for (const auto& [name, v] : cfg.sut.profiles) {
    profiles[name] = {{"max_detect_range", v.profile.max_detect_range_m},
                      {"confidence_slope", v.profile.confidence_slope},
                      {"miss_rate_base", v.profile.miss_rate_base},
                      {"min_bbox_frac", v.profile.min_bbox_frac},
                      {"latency_ticks", v.profile.latency_ticks},
                      {"command", v.command}};
  }
  j["sut"] = {{"profiles", profiles},
              {"planner",
               {{"trigger_classes",
                 std::vector<std::string>(cfg.sut.planner.trigger_classes.begin(),
                                          cfg.sut.planner.trigger_classes.end())},
                {"min_confidence", cfg.sut.planner.min_confidence},
                {"min_bbox_frac", cfg.sut.planner.min_bbox_frac},
                {"latch", cfg.sut.planner.latch}}},
              {"controller", {{"kp", cfg.sut.controller.kp}}},
              {"lighting",
               {{"high_beam_below", cfg.sut.lighting.high_beam_below},
                {"low_beam_below", cfg.sut.lighting.low_beam_below}}}};

  j["stream"] = {{"bind", cfg.stream_bind}};
  j["hpc"] = {{"job_name", cfg.hpc.job_name},
              {"cpus_per_task", cfg.hpc.cpus_per_task},
              {"mem_gb", cfg.hpc.mem_gb},
              {"walltime", cfg.hpc.walltime},
              {"queue", cfg.hpc.queue}};
  return j.dump(2) + "\n";
}

}  // namespace vpg::orchestrator
