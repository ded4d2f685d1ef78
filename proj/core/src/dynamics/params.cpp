#include "vpg/dynamics/params.hpp"

#include <cmath>

#include "vpg/common/errors.hpp"

namespace vpg::dynamics {

double VehicleParams::gear_ratio(int gear) const {
  if (gear == -1) return reverse_gear_ratio;
  if (gear >= 1 && gear <= top_gear()) {
    return forward_gear_ratios[static_cast<std::size_t>(gear - 1)];
  }
  throw InvalidParameterError("gear index out of range: " + std::to_string(gear));
}

void VehicleParams::validate() const {
  for (const auto& c : corners) {
    if (c.sprung_mass_kg <= 0.0) throw InvalidParameterError("corner sprung mass must be > 0");
    if (c.wheel_mass_kg <= 0.0) throw InvalidParameterError("wheel mass must be > 0");
    if (c.natural_frequency_rad_s <= 0.0) {
      throw InvalidParameterError("suspension natural frequency must be > 0");
    }
    if (c.damping_ratio < 0.0) throw InvalidParameterError("damping ratio must be >= 0");
  }
  if (wheelbase_m <= 0.0) throw InvalidParameterError("wheelbase must be > 0");
  if (track_width_m <= 0.0) throw InvalidParameterError("track width must be > 0");
  if (tire_radius_m <= 0.0) throw InvalidParameterError("tire radius must be > 0");
  if (braking_distance_m <= 0.0) throw InvalidParameterError("braking distance must be > 0");
  if (forward_gear_ratios.empty()) throw InvalidParameterError("at least one forward gear required");
  for (double gr : forward_gear_ratios) {
    if (gr == 0.0) throw InvalidParameterError("gear ratios must be nonzero");
  }
  if (reverse_gear_ratio == 0.0) throw InvalidParameterError("reverse ratio must be nonzero");
  if (v_max_mps <= 0.0) throw InvalidParameterError("v_max must be > 0");
  if (!(shift_down_rpm < shift_up_rpm)) {
    throw InvalidParameterError("shift_down_rpm must be below shift_up_rpm");
  }
  if (engine_torque_curve.empty()) throw InvalidParameterError("engine torque curve is empty");
  for (std::size_t i = 1; i < engine_torque_curve.size(); ++i) {
    if (engine_torque_curve[i].first <= engine_torque_curve[i - 1].first) {
      throw InvalidParameterError("engine torque curve RPM breakpoints must increase");
    }
  }
  if (!(tire_long.s0 < tire_long.se && tire_long.se < tire_long.sa)) {
    throw InvalidParameterError("longitudinal tire control points out of order");
  }
  if (!(tire_lat.s0 < tire_lat.se && tire_lat.se < tire_lat.sa)) {
    throw InvalidParameterError("lateral tire control points out of order");
  }
}

InertiaSummary aggregate_inertia(const std::array<CornerParams, 4>& corners) {
  InertiaSummary out;
  Vec3 weighted = Vec3::Zero();
  for (const auto& c : corners) {
    if (c.sprung_mass_kg <= 0.0) {
      throw InvalidParameterError("aggregate_inertia: corner mass must be > 0");
    }
    out.mass_kg += c.sprung_mass_kg;
    weighted += c.sprung_mass_kg * c.mount_position_m;
  }
  out.com_m = weighted / out.mass_kg;
  for (const auto& c : corners) {
    out.moi_kg_m2 += c.sprung_mass_kg * (c.mount_position_m - out.com_m).squaredNorm();
  }
  return out;
}

SuspensionCoefficients suspension_coefficients(double sprung_mass_kg,
                                               double natural_frequency_rad_s,
                                               double damping_ratio) {
  if (sprung_mass_kg <= 0.0 || natural_frequency_rad_s <= 0.0) {
    throw InvalidParameterError("suspension_coefficients: mass and frequency must be > 0");
  }
  if (damping_ratio < 0.0) {
    throw InvalidParameterError("suspension_coefficients: damping ratio must be >= 0");
  }
  SuspensionCoefficients out;
  out.stiffness_n_m = sprung_mass_kg * natural_frequency_rad_s * natural_frequency_rad_s;
  out.damping_n_s_m = 2.0 * damping_ratio * std::sqrt(out.stiffness_n_m * sprung_mass_kg);
  return out;
}

VehicleParams default_vehicle_params() {
  VehicleParams p;
  const double half_l = p.wheelbase_m / 2.0;
  const double half_w = p.track_width_m / 2.0;
  p.corners[0].mount_position_m = Vec3(half_l, half_w, 0.0);    // FL
  p.corners[1].mount_position_m = Vec3(half_l, -half_w, 0.0);   // FR
  p.corners[2].mount_position_m = Vec3(-half_l, half_w, 0.0);   // RL
  p.corners[3].mount_position_m = Vec3(-half_l, -half_w, 0.0);  // RR
  return p;
}

}  // namespace vpg::dynamics
