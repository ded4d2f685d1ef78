#pragma once

#include <string>
#include <vector>

#include "vpg/common/rng.hpp"
#include "vpg/dynamics/state.hpp"
#include "vpg/scenario/conditions.hpp"

namespace vpg::sut {

/// Parametric stand-in for a perception model. The four shipped profiles
/// trade detection range, confidence slope, miss rate, minimum box size, and
/// pipeline latency against each other.
struct DetectorProfile {
  std::string name = "det-A";
  double max_detect_range_m = 250.0;
  double confidence_slope = 1.0;   // rho
  double miss_rate_base = 0.02;    // [0, 1)
  double min_bbox_frac = 0.008;
  int latency_ticks = 2;

  void validate() const;
};

struct Detection {
  std::string class_tag;
  double confidence = 0.0;        // [0, 1]
  double bbox_height_frac = 0.0;  // (0, 1]
  double range_m = 0.0;
};

/// Effective detection range for the current scene lighting: the profile cap
/// or the light-boosted visibility, whichever is smaller.
double effective_detect_range(const DetectorProfile& profile,
                              const scenario::Conditions& conditions,
                              double ambient_light, dynamics::Lights lights);

/// Headlight multiplier on visibility. Fog lights help in fog and mildly hurt
/// otherwise; running dark below 0.5 ambient costs range.
double light_boost(dynamics::Lights lights, double ambient_light, bool fog_present);

/// Synthesizes detections of one obstacle at `true_range_m`. Draws exactly
/// one uniform per call (even when out of range) so profile comparisons under
/// a shared seed stay tick-aligned. Pass a non-positive range when no
/// obstacle is visible.
std::vector<Detection> synth_detect(double true_range_m, const std::string& class_tag,
                                    double obstacle_height_m, double height_projection_factor,
                                    const scenario::Conditions& conditions,
                                    double ambient_light, dynamics::Lights lights,
                                    const DetectorProfile& profile, Rng& rng);

}  // namespace vpg::sut
