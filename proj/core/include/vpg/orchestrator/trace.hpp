#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vpg/dynamics/state.hpp"
#include "vpg/kpi/kpi.hpp"
#include "vpg/scenario/conditions.hpp"
#include "vpg/scenario/scene.hpp"
#include "vpg/sut/detector.hpp"

namespace vpg::orchestrator {

inline constexpr int kTraceSchemaVersion = 1;

/// First line of every trace: campaign metadata plus everything replay needs
/// to recompute KPI rows (scene geometry, ego box, FOS, dt).
struct TraceHeader {
  int schema_version = kTraceSchemaVersion;
  std::string campaign;
  int case_id = 0;
  std::string sut;
  std::int64_t seed = 0;
  double dt_s = 0.01;
  double fos_m = 1.0;
  scenario::Conditions conditions;
  scenario::Scene scene;
  double body_length_m = 4.6;
  double body_width_m = 1.9;
  double body_height_m = 1.6;
  double target_speed_mps = 15.0;
};

/// One per tick. State values are stored at full precision (round-trippable)
/// so replay reproduces the KPI CSV byte-for-byte.
struct TraceTick {
  int tick = 0;
  double t_s = 0.0;
  // Post-step vehicle state summary.
  double x = 0.0, y = 0.0, z = 0.0, yaw = 0.0;
  double v_mps = 0.0;
  double engine_rpm = 0.0;
  int gear = 1;
  double steering_rad = 0.0;
  // Sensor summaries.
  std::array<std::int64_t, 4> encoder_ticks{};
  int lidar_point_count = 0;
  // SUT outputs.
  std::vector<sut::Detection> detections;
  dynamics::ControlInput control;
  int aeb_trigger = 0;
  // KPI row values as logged.
  double dtc_m = kpi::kDtcCap;
  int collision_count = 0;
};

std::string trace_header_line(const TraceHeader& header);
std::string trace_tick_line(const TraceTick& tick);

TraceHeader parse_trace_header(const std::string& line);
TraceTick parse_trace_tick(const std::string& line);

struct ReplayResult {
  TraceHeader header;
  std::vector<kpi::KpiRecord> records;
  kpi::TestVerdict verdict;
  std::string kpi_csv;  // regenerated, byte-compatible with the live file
};

/// Recomputes KPI rows and the verdict from a stored trace without
/// re-simulation. Truncated or corrupt traces raise vpg::Error naming the
/// offending line number.
ReplayResult replay(const std::filesystem::path& trace_path);

/// KPI row reconstruction shared by the live path and replay.
kpi::KpiRecord kpi_row_from_tick(const TraceTick& tick);

/// Ego collision box rebuilt from the tick's stored pose fields. The live
/// path uses this too, so replayed geometry is bit-identical.
Obb ego_box_from_tick(const TraceTick& tick, double length_m, double width_m,
                      double height_m);

}  // namespace vpg::orchestrator
