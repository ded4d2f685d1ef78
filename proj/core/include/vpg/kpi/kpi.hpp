#pragma once

#include <string>
#include <vector>

#include "vpg/common/geometry.hpp"
#include "vpg/dynamics/state.hpp"
#include "vpg/scenario/scene.hpp"

namespace vpg::kpi {

/// Sentinel cap for "no obstacle": DTC is reported as a large finite value.
inline constexpr double kDtcCap = 1e6;

/// One logged KPI row (the Fig.-5-style columns).
struct KpiRecord {
  double t_s = 0.0;
  int aeb_trigger = 0;
  double dtc_m = kDtcCap;
  int collision_count = 0;
  double throttle = 0.0;
  double brake = 0.0;
  double speed_mps = 0.0;
  dynamics::Lights lights = dynamics::Lights::kOff;
};

/// Minimum surface gap between the ego box and any non-ground obstacle;
/// 0 when overlapping, kDtcCap when the scene has no obstacles.
double distance_to_collision(const Obb& ego_box, const scenario::Scene& scene);

/// Edge-triggered collision counter: one increment per transition from
/// non-overlap to overlap, tracked per obstacle; never decrements.
class CollisionTracker {
 public:
  explicit CollisionTracker(const scenario::Scene& scene);

  int update(const Obb& ego_box, const scenario::Scene& scene);

  int count() const { return count_; }

 private:
  int count_ = 0;
  std::vector<bool> overlapping_;  // parallel to scene.obstacles
};

/// Ego collision box centered on the vehicle pose.
Obb ego_bounding_box(const Pose& vehicle_pose, double length_m, double width_m,
                     double height_m);

struct TestVerdict {
  int case_id = 0;
  std::string sut;
  bool passed = false;
  double min_dtc_m = kDtcCap;
  bool fos_violated = false;
  int ticks = 0;
  double wall_time_s = 0.0;  // measurement only; excluded from byte-compared files
};

/// Pass iff the final collision count is zero; fos_violated flags passing
/// runs whose closest approach dropped under the factor-of-safety margin.
TestVerdict verdict(const std::vector<KpiRecord>& records, double fos_m);

struct SutOutcome {
  std::string sut;
  int passed = 0;
  int total = 0;
};

struct AggregateOutcome {
  std::vector<SutOutcome> per_sut;
  SutOutcome cumulative;  // sut == "cumulative"
};

/// Per-SUT pass counts in first-seen order plus the cumulative row.
AggregateOutcome aggregate_results(const std::vector<TestVerdict>& verdicts);

struct SpeedupReport {
  double theoretical = 0.0;  // number of cases in the batch
  double achieved = 0.0;     // sum of serial times / wall time
  double efficiency = 0.0;   // achieved / theoretical
};

/// 0.2 Hz resource telemetry row covering all live workers.
struct ResourceSample {
  double t_s = 0.0;
  double cpu_cores_busy = 0.0;  // sum of per-worker CPU fractions
  double rss_gb = 0.0;
};

SpeedupReport speedup_report(const std::vector<double>& per_case_serial_times_s,
                             double batch_wall_time_s);

/// KPI CSV encoding: fixed column order, 6-decimal fixed-point reals.
std::string kpi_csv_header();
std::string kpi_csv_row(const KpiRecord& r);
std::vector<KpiRecord> parse_kpi_csv(const std::string& text);

}  // namespace vpg::kpi
