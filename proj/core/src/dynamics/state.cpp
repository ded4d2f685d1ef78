#include "vpg/dynamics/state.hpp"

#include "vpg/common/errors.hpp"
#include "vpg/dynamics/model.hpp"

namespace vpg::dynamics {

std::string to_string(Lights lights) {
  switch (lights) {
    case Lights::kOff: return "off";
    case Lights::kLowBeam: return "low_beam";
    case Lights::kHighBeam: return "high_beam";
    case Lights::kFog: return "fog";
  }
  return "off";
}

Lights lights_from_string(const std::string& name) {
  if (name == "off") return Lights::kOff;
  if (name == "low_beam") return Lights::kLowBeam;
  if (name == "high_beam") return Lights::kHighBeam;
  if (name == "fog") return Lights::kFog;
  throw InvalidParameterError("unknown lights value: " + name);
}

void VehicleState::validate(const VehicleParams& params) const {
  if (!rotation_is_orthonormal(pose.linear())) {
    throw InvalidStateError("vehicle pose rotation is not orthonormal");
  }
  if (engine_rpm < 0.0) throw InvalidStateError("engine RPM must be >= 0");
  if (gear != -1 && (gear < 1 || gear > params.top_gear())) {
    throw InvalidStateError("gear index outside ratio table: " + std::to_string(gear));
  }
}

VehicleState initial_state(const VehicleParams& params, const Pose& spawn) {
  VehicleState s;
  s.pose = spawn;
  s.engine_rpm = params.idle_rpm;
  for (int i = 0; i < 4; ++i) {
    const auto& c = params.corners[static_cast<std::size_t>(i)];
    const auto coeffs =
        suspension_coefficients(c.sprung_mass_kg, c.natural_frequency_rad_s, c.damping_ratio);
    // Equilibrium deflection where the corner's suspension force vanishes.
    s.suspension_z_m[static_cast<std::size_t>(i)] =
        c.wheel_mass_kg * kGravity / coeffs.stiffness_n_m;
  }
  return s;
}

}  // namespace vpg::dynamics
