#include "vpg/sut/detector.hpp"

#include <algorithm>
#include <cmath>

#include "vpg/common/errors.hpp"

namespace vpg::sut {

void DetectorProfile::validate() const {
  if (max_detect_range_m <= 0.0) {
    throw InvalidParameterError("detector profile: max_detect_range must be > 0");
  }
  if (miss_rate_base < 0.0 || miss_rate_base >= 1.0) {
    throw InvalidParameterError("detector profile: miss_rate_base must be in [0, 1)");
  }
  if (confidence_slope <= 0.0) {
    throw InvalidParameterError("detector profile: confidence_slope must be > 0");
  }
  if (min_bbox_frac <= 0.0 || min_bbox_frac > 1.0) {
    throw InvalidParameterError("detector profile: min_bbox_frac must be in (0, 1]");
  }
  if (latency_ticks < 0) {
    throw InvalidParameterError("detector profile: latency_ticks must be >= 0");
  }
}

double light_boost(dynamics::Lights lights, double ambient_light, bool fog_present) {
  switch (lights) {
    case dynamics::Lights::kHighBeam: return 1.3;
    case dynamics::Lights::kLowBeam: return 1.1;
    case dynamics::Lights::kFog: return fog_present ? 1.5 : 0.9;
    case dynamics::Lights::kOff: return ambient_light < 0.5 ? 0.7 : 1.0;
  }
  return 1.0;
}

double effective_detect_range(const DetectorProfile& profile,
                              const scenario::Conditions& conditions,
                              double ambient_light, dynamics::Lights lights) {
  const double boosted =
      conditions.visibility_m * light_boost(lights, ambient_light, conditions.fog_present);
  return std::min(profile.max_detect_range_m, boosted);
}

std::vector<Detection> synth_detect(double true_range_m, const std::string& class_tag,
                                    double obstacle_height_m, double height_projection_factor,
                                    const scenario::Conditions& conditions,
                                    double ambient_light, dynamics::Lights lights,
                                    const DetectorProfile& profile, Rng& rng) {
  // One draw per call keeps rng streams aligned across profiles.
  const double u = rng.uniform();
  if (!(true_range_m > 0.0)) return {};

  const double r_eff = effective_detect_range(profile, conditions, ambient_light, lights);
  if (true_range_m > r_eff) return {};

  // Misses grow toward the edge of the effective range and in the dark.
  const double range_frac = true_range_m / r_eff;
  const double dark_penalty = 0.5 * (1.0 - ambient_light);
  const double miss = std::clamp(
      profile.miss_rate_base * (1.0 + dark_penalty) +
          (1.0 - profile.miss_rate_base) * range_frac * range_frac * range_frac * range_frac,
      0.0, 0.99);
  if (u < miss) return {};

  Detection det;
  det.class_tag = class_tag;
  det.range_m = true_range_m;
  det.confidence =
      std::clamp(1.0 - true_range_m / (profile.confidence_slope * r_eff), 0.0, 1.0);
  det.bbox_height_frac = std::clamp(
      obstacle_height_m * height_projection_factor / true_range_m, 0.0, 1.0);
  if (det.bbox_height_frac < profile.min_bbox_frac) return {};
  return {det};
}

}  // namespace vpg::sut
