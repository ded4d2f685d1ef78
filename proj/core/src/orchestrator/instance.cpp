#include "vpg/orchestrator/instance.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vpg/common/errors.hpp"
#include "vpg/dynamics/model.hpp"
#include "vpg/orchestrator/trace.hpp"
#include "vpg/sensors/encoder.hpp"
#include "vpg/sensors/ins.hpp"
#include "vpg/sensors/lidar.hpp"
#include "vpg/sut/stack.hpp"

namespace vpg::orchestrator {

namespace {

constexpr double kStationarySpeed = 1e-3;  // m/s

std::unique_ptr<sut::SutInterface> make_sut(const CampaignConfig& cfg,
                                            const scenario::TestCase& test) {
  const auto it = cfg.sut.profiles.find(test.sut);
  if (it == cfg.sut.profiles.end()) {
    throw ConfigError("case references unknown SUT profile '" + test.sut + "'");
  }
  const auto& variant = it->second;
  if (!variant.command.empty()) {
    return std::make_unique<sut::ExternalProcessSut>(variant.command);
  }
  return std::make_unique<sut::ReferenceAebStack>(
      variant.profile, cfg.sut.planner, cfg.sut.controller, cfg.sut.lighting,
      cfg.sensors.camera.height_projection_factor(), static_cast<std::uint64_t>(test.seed));
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path.string());
  out << content;
}

}  // namespace

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::kHeadless: return "headless";
    case RunMode::kRecordReplay: return "record";
    case RunMode::kLiveStream: return "stream";
  }
  return "headless";
}

RunMode run_mode_from_string(const std::string& name) {
  if (name == "headless") return RunMode::kHeadless;
  if (name == "record" || name == "record_replay") return RunMode::kRecordReplay;
  if (name == "stream" || name == "live_stream") return RunMode::kLiveStream;
  throw ConfigError("unknown run mode: '" + name + "'");
}

scenario::TestCase find_case(const CampaignConfig& cfg, int case_id) {
  auto cases = scenario::expand_matrix(cfg.matrix, cfg.tables);
  if (case_id < 0 || case_id >= static_cast<int>(cases.size())) {
    throw ConfigError("case id " + std::to_string(case_id) + " outside campaign of " +
                      std::to_string(cases.size()) + " cases");
  }
  auto test = cases[static_cast<std::size_t>(case_id)];
  test.scene_name = cfg.scene.name;
  test.timeout_s = cfg.campaign.case_timeout_s;
  return test;
}

std::string verdict_text(const kpi::TestVerdict& v) {
  std::ostringstream out;
  out << "case_id=" << v.case_id << "\n";
  out << "sut=" << v.sut << "\n";
  out << "passed=" << (v.passed ? "true" : "false") << "\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v.min_dtc_m);
  out << "min_dtc=" << buf << "\n";
  out << "fos_violated=" << (v.fos_violated ? "true" : "false") << "\n";
  out << "ticks=" << v.ticks << "\n";
  return out.str();
}

kpi::TestVerdict parse_verdict_text(const std::string& text) {
  kpi::TestVerdict v;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "case_id") v.case_id = std::stoi(value);
    else if (key == "sut") v.sut = value;
    else if (key == "passed") v.passed = value == "true";
    else if (key == "min_dtc") v.min_dtc_m = std::stod(value);
    else if (key == "fos_violated") v.fos_violated = value == "true";
    else if (key == "ticks") v.ticks = std::stoi(value);
  }
  return v;
}

InstanceOutcome run_instance(const CampaignConfig& cfg, const scenario::TestCase& test,
                             RunMode mode, const std::filesystem::path& case_dir,
                             const TracePublisher& publisher) {
  const auto wall_start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(case_dir);

  InstanceOutcome outcome;
  outcome.verdict.case_id = test.id;
  outcome.verdict.sut = test.sut;

  const double dt = cfg.campaign.dt_s;
  const auto& conditions = test.conditions;

  TraceHeader header;
  header.campaign = cfg.campaign.name;
  header.case_id = test.id;
  header.sut = test.sut;
  header.seed = test.seed;
  header.dt_s = dt;
  header.fos_m = cfg.campaign.fos_m;
  header.conditions = conditions;
  header.scene = cfg.scene;
  header.body_length_m = cfg.vehicle.body_length_m;
  header.body_width_m = cfg.vehicle.body_width_m;
  header.body_height_m = cfg.vehicle.body_height_m;
  header.target_speed_mps = cfg.scene.lane.target_speed_mps;

  std::ofstream trace_out;
  const bool tracing = mode != RunMode::kHeadless;
  if (tracing) {
    trace_out.open(case_dir / "trace.ndjson", std::ios::binary);
    if (!trace_out) throw Error("cannot write trace under " + case_dir.string());
  }
  auto emit = [&](const std::string& line) {
    if (tracing) trace_out << line << "\n";
    if (mode == RunMode::kLiveStream && publisher) publisher(line);
  };
  if (tracing || (mode == RunMode::kLiveStream && publisher)) emit(trace_header_line(header));

  std::vector<kpi::KpiRecord> records;
  std::string kpi_csv = kpi::kpi_csv_header() + "\n";

  try {
    dynamics::VehicleModel model(cfg.vehicle);
    dynamics::VehicleState state = dynamics::initial_state(cfg.vehicle, cfg.scene.ego_spawn);
    auto stack = make_sut(cfg, test);

    // Per-case sensor streams mix the case seed with the configured noise
    // seeds, so reseeding a channel in the config changes its draws alone.
    auto mix = [&](std::uint64_t channel, std::uint64_t noise_seed) {
      std::uint64_t h = static_cast<std::uint64_t>(test.seed) * 0x9e3779b97f4a7c15ULL;
      h ^= channel + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h ^= noise_seed + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      return h;
    };
    const auto& ins_noise = cfg.sensors.ins_noise;
    sensors::InsSensor ins(ins_noise,
                           mix(1, ins_noise.position.seed ^ (ins_noise.velocity.seed << 1) ^
                                      (ins_noise.angular_rate.seed << 2)));
    Rng lidar_rng(mix(2, cfg.sensors.lidar_noise.seed));

    kpi::CollisionTracker tracker(cfg.scene);

    // Nearest tagged (non-ground) obstacle drives the synthetic perception
    // channel; the shipped scene has exactly one.
    const scenario::Obstacle* target = nullptr;
    for (const auto& o : cfg.scene.obstacles) {
      if (!o.is_ground) {
        target = &o;
        break;
      }
    }

    const int max_ticks = static_cast<int>(std::ceil(cfg.campaign.tick_budget_s / dt));
    const int lidar_every = cfg.sensors.lidar_enabled
                                ? std::max(1, static_cast<int>(std::llround(
                                                  1.0 / (cfg.sensors.lidar.update_rate_hz * dt))))
                                : 0;

    int lidar_points = 0;
    double lidar_min_range = -1.0;
    double collision_at_s = -1.0;
    double stationary_since_s = -1.0;
    bool triggered_once = false;

    for (int tick = 0; tick < max_ticks; ++tick) {
      const double t_now = tick * dt;

      // Sensing on the current state.
      sut::SensorFrame frame;
      frame.t_s = t_now;
      frame.body_velocity_mps = state.body_velocity_mps;
      for (int w = 0; w < 4; ++w) {
        frame.encoder_ticks[static_cast<std::size_t>(w)] = sensors::encoder_read(
            state.wheel_revolutions[static_cast<std::size_t>(w)], cfg.sensors.encoder);
      }
      frame.ins = ins.read(state.pose, dt);
      if (cfg.sensors.lidar_enabled && tick % lidar_every == 0) {
        const auto cloud = sensors::lidar_scan(state.pose, cfg.sensors.lidar, cfg.scene,
                                               cfg.sensors.lidar_noise, lidar_rng, t_now,
                                               cfg.sensors.lidar_threads);
        lidar_points = static_cast<int>(cloud.points.size());
        lidar_min_range = -1.0;
        for (const auto& p : cloud.points) {
          const double r = p.norm();
          if (lidar_min_range < 0.0 || r < lidar_min_range) lidar_min_range = r;
        }
      }
      frame.lidar_point_count = lidar_points;
      frame.lidar_min_range_m = lidar_min_range;
      frame.target_speed_mps = cfg.scene.lane.target_speed_mps;
      if (target != nullptr) {
        const Obb ego_now = kpi::ego_bounding_box(state.pose, cfg.vehicle.body_length_m,
                                                  cfg.vehicle.body_width_m,
                                                  cfg.vehicle.body_height_m);
        frame.obstacle_range_m = kpi::distance_to_collision(ego_now, cfg.scene);
        frame.obstacle_class = target->tag;
        frame.obstacle_height_m = target->dimensions.z();
      }

      // SUT and dynamics.
      const dynamics::ControlInput control = stack->tick(frame, conditions);
      state = model.step(state, control, cfg.scene, conditions, dt);

      // KPI row from the canonical trace record so replay is byte-identical.
      TraceTick rec;
      rec.tick = tick;
      rec.t_s = (tick + 1) * dt;
      rec.x = state.pose.translation().x();
      rec.y = state.pose.translation().y();
      rec.z = state.pose.translation().z();
      rec.yaw = yaw_of(state.pose);
      rec.v_mps = state.body_velocity_mps;
      rec.engine_rpm = state.engine_rpm;
      rec.gear = state.gear;
      rec.steering_rad = state.steering_angle_rad;
      rec.encoder_ticks = frame.encoder_ticks;
      rec.lidar_point_count = lidar_points;
      rec.detections = stack->last_detections();
      rec.control = control;
      rec.aeb_trigger = stack->last_trigger();

      const Obb ego = ego_box_from_tick(rec, cfg.vehicle.body_length_m,
                                        cfg.vehicle.body_width_m, cfg.vehicle.body_height_m);
      rec.dtc_m = kpi::distance_to_collision(ego, cfg.scene);
      rec.collision_count = tracker.update(ego, cfg.scene);

      const kpi::KpiRecord row = kpi_row_from_tick(rec);
      records.push_back(row);
      kpi_csv += kpi::kpi_csv_row(row) + "\n";
      emit(trace_tick_line(rec));
      outcome.last_valid_tick = tick;

      // Stop conditions.
      const double t_next = rec.t_s;
      if (rec.collision_count > 0 && collision_at_s < 0.0) collision_at_s = t_next;
      if (collision_at_s >= 0.0 &&
          t_next - collision_at_s >= cfg.campaign.stop_after_collision_s) {
        break;
      }
      if (rec.aeb_trigger != 0) triggered_once = true;
      if (triggered_once && std::abs(state.body_velocity_mps) < kStationarySpeed) {
        if (stationary_since_s < 0.0) stationary_since_s = t_next;
        if (t_next - stationary_since_s >= cfg.campaign.stop_after_stationary_s) break;
      } else {
        stationary_since_s = -1.0;
      }
    }

    outcome.verdict = kpi::verdict(records, cfg.campaign.fos_m);
    outcome.verdict.case_id = test.id;
    outcome.verdict.sut = test.sut;
    outcome.executed = true;
  } catch (const std::exception& e) {
    outcome.executed = false;
    outcome.failure_reason = e.what();
  }

  const auto wall_end = std::chrono::steady_clock::now();
  outcome.wall_time_s = std::chrono::duration<double>(wall_end - wall_start).count();
  outcome.verdict.wall_time_s = outcome.wall_time_s;

  write_file(case_dir / "kpi.csv", kpi_csv);
  if (outcome.executed) {
    write_file(case_dir / "verdict.txt", verdict_text(outcome.verdict));
  }
  nlohmann::json meta;
  meta["case_id"] = test.id;
  meta["sut"] = test.sut;
  meta["mode"] = to_string(mode);
  meta["executed"] = outcome.executed;
  meta["failure_reason"] = outcome.failure_reason;
  meta["last_valid_tick"] = outcome.last_valid_tick;
  meta["wall_time_s"] = outcome.wall_time_s;
  write_file(case_dir / "meta.json", meta.dump(2) + "\n");

  return outcome;
}

}  // namespace vpg::orchestrator
