#pragma once

#include <array>
#include <string>

#include "vpg/common/se3.hpp"
#include "vpg/dynamics/params.hpp"

namespace vpg::dynamics {

enum class Lights { kOff, kLowBeam, kHighBeam, kFog };

std::string to_string(Lights lights);
Lights lights_from_string(const std::string& name);

/// Driver/SUT commands for one tick.
struct ControlInput {
  double throttle = 0.0;        // [0, 1]
  double steering_cmd_rad = 0.0;
  double brake = 0.0;           // [0, 1]
  bool handbrake = false;
  Lights lights = Lights::kOff;
};

/// Evolving rigid-body + powertrain state of the ego twin.
///
/// Wheel order matches VehicleParams::corners: FL, FR, RL, RR.
struct VehicleState {
  Pose pose = Pose::Identity();          // body w.r.t. world
  double body_velocity_mps = 0.0;        // signed along heading
  double lateral_velocity_mps = 0.0;     // body frame +y
  double yaw_rate_rad_s = 0.0;
  std::array<double, 4> wheel_rpm{};     // signed wheel angular speeds
  std::array<double, 4> suspension_z_m{};
  std::array<double, 4> suspension_zdot_mps{};
  std::array<double, 4> wheel_revolutions{};  // cumulative, signed
  double engine_rpm = 800.0;
  int gear = 1;                          // 1-based forward, -1 reverse
  double steering_angle_rad = 0.0;
  double output_torque_nm = 0.0;         // last computed tau_total
  double throttle_filter_state = 0.0;    // smoothing operator memory

  /// Throws InvalidStateError if the pose rotation is not orthonormal or the
  /// gear index is outside the ratio table.
  void validate(const VehicleParams& params) const;
};

/// State at rest at `spawn` with the suspension relaxed to its equilibrium
/// deflection, so that a zero-input step produces no motion.
VehicleState initial_state(const VehicleParams& params, const Pose& spawn);

}  // namespace vpg::dynamics
