#include "vpg/sut/controller.hpp"

#include <algorithm>

namespace vpg::sut {

dynamics::ControlInput drive_controller(int aeb_trigger, double body_velocity_mps,
                                        double target_speed_mps,
                                        const CruiseControllerConfig& cfg) {
  dynamics::ControlInput out;
  if (aeb_trigger != 0) {
    out.throttle = 0.0;
    out.brake = 1.0;
    return out;
  }
  const double error = target_speed_mps - body_velocity_mps;
  out.throttle = std::clamp(cfg.kp * error, 0.0, 1.0);
  out.brake = std::clamp(cfg.kp * -error, 0.0, 1.0);
  return out;
}

dynamics::Lights lighting_policy(double ambient_light, bool fog_present,
                                 const LightingThresholds& thresholds) {
  if (fog_present) return dynamics::Lights::kFog;
  if (ambient_light < thresholds.high_beam_below) return dynamics::Lights::kHighBeam;
  if (ambient_light < thresholds.low_beam_below) return dynamics::Lights::kLowBeam;
  return dynamics::Lights::kOff;
}

}  // namespace vpg::sut
