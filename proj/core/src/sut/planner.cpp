#include "vpg/sut/planner.hpp"

namespace vpg::sut {

int AebPlanner::plan(const std::vector<Detection>& detections) {
  if (state_ == PlannerState::kBrake && cfg_.latch) return 1;

  bool trigger = false;
  for (const auto& d : detections) {
    if (cfg_.trigger_classes.count(d.class_tag) > 0 &&
        d.confidence >= cfg_.min_confidence && d.bbox_height_frac >= cfg_.min_bbox_frac) {
      trigger = true;
      break;
    }
  }
  if (trigger) {
    state_ = PlannerState::kBrake;
    return 1;
  }
  state_ = PlannerState::kCruise;  // unlatched planner releases without detections
  return 0;
}

}  // namespace vpg::sut
