#pragma once

#include <set>
#include <string>
#include <vector>

#include "vpg/sut/detector.hpp"

namespace vpg::sut {

enum class PlannerState { kCruise, kBrake };

/// Finite-state AEB planner. With `latch` enabled BRAKE is absorbing.
struct AebPlannerConfig {
  std::set<std::string> trigger_classes = {"stalled_vehicle"};
  double min_confidence = 0.6;
  double min_bbox_frac = 0.012;
  bool latch = true;
};

class AebPlanner {
 public:
  explicit AebPlanner(AebPlannerConfig cfg) : cfg_(std::move(cfg)) {}

  /// Returns 1 iff a qualifying detection is present or the latched BRAKE
  /// state holds; transitions CRUISE -> BRAKE on trigger.
  int plan(const std::vector<Detection>& detections);

  PlannerState state() const { return state_; }
  const AebPlannerConfig& config() const { return cfg_; }

 private:
  AebPlannerConfig cfg_;
  PlannerState state_ = PlannerState::kCruise;
};

}  // namespace vpg::sut
