#pragma once

#include <array>
#include <utility>

#include "vpg/dynamics/params.hpp"
#include "vpg/dynamics/state.hpp"
#include "vpg/dynamics/tire.hpp"
#include "vpg/scenario/conditions.hpp"
#include "vpg/scenario/scene.hpp"

namespace vpg::dynamics {

inline constexpr double kGravity = 9.81;               // m/s^2
inline constexpr double kBrakeCalibrationSpeed = 26.8224;  // 60 MPH in m/s
inline constexpr double kSlipDenominatorFloor = 0.1;   // m/s
inline constexpr double kThrottleFilterTau = 0.2;      // s, smoothing operator
inline constexpr double kRpmSmoothingTau = 0.5;        // s

/// tau_total = tau_e(RPM_e) * GR(gear) * FDR * effective_throttle.
/// The torque curve is interpolated piecewise-linearly and clamped to its
/// endpoints outside the tabulated RPM range. `effective_throttle` is the
/// throttle after the smoothing operator (equal to raw throttle at steady
/// state).
double powertrain_torque(double effective_throttle, double engine_rpm, int gear,
                         const VehicleParams& params);

/// One low-pass step of the throttle smoothing operator.
double smooth_throttle(double filter_state, double raw_throttle, double dt);

/// Engine speed target: RPM_i + mean(|RPM_w|) * FDR * GR, floored at idle.
double engine_target_rpm(const std::array<double, 4>& wheel_rpm, int gear,
                         const VehicleParams& params);

/// Exponential smoothing of engine speed toward its target plus automatic
/// gear shifts with hysteresis. Reverse is never entered or left here.
std::pair<double, int> update_engine_state(const VehicleState& state,
                                           const VehicleParams& params, double dt);

struct AxleTorques {
  double left_nm = 0.0;
  double right_nm = 0.0;
};

/// Open-differential split with steering-dependent torque drop; each drop
/// product is clamped to [0, 0.9] per wheel.
AxleTorques differential_split(double total_torque_nm, double steering_rad,
                               Drivetrain drivetrain, double torque_drop);

/// Brake torque capacity: brake * (iM * v^2) / (2 * D_brake) * R_b. Callers
/// pass the fixed 60 MPH calibration speed so capacity stays constant.
double brake_torque(double sprung_mass_kg, double v_mps, double braking_distance_m,
                    double brake_disk_radius_m, double brake_input);

struct AckermannAngles {
  double left_rad = 0.0;
  double right_rad = 0.0;
};

/// Per-wheel steer angles from the Ackermann geometry; the inner wheel of the
/// turn receives the larger magnitude.
AckermannAngles ackermann_angles(double steering_rad, double wheelbase_m,
                                 double track_width_m);

/// Slew-rate-limited steering: the angle moves toward the command at the rate
/// |kappa_delta + kappa_v * v / v_max|, snapping when within one step.
double apply_steering(double steering_rad, double command_rad, double v_mps,
                      const VehicleParams& params, double dt);

/// Vertical force on the wheel body: -(B*(zdot-Zdot) + K*(z-Z)) + m*g.
double suspension_force(const CornerParams& corner, double z, double zdot, double road_z,
                        double road_zdot, double gravity = kGravity);

/// Variable air drag, by operating condition, opposing the velocity sign.
/// `output_torque_nm` is the tau_total computed this tick.
double aero_drag(double v_mps, double output_torque_nm, int gear,
                 double mean_wheel_rpm, const VehicleParams& params);

/// Longitudinal slip: (omega * R - v) / max(|v|, 0.1).
double longitudinal_slip(double wheel_omega_rad_s, double tire_radius_m, double v_mps);

/// Lateral slip angle in radians, with the same low-speed floor.
double lateral_slip(double v_lat_mps, double v_long_mps);

/// Immutable simulation model: parameters, fitted tire splines, and derived
/// aggregates. Shareable across concurrent instances; each instance owns its
/// VehicleState.
class VehicleModel {
 public:
  explicit VehicleModel(VehicleParams params);

  /// Advances one fixed timestep. `traction_scale` comes from the scenario
  /// conditions. Throws SimulationDivergedError when a sub-model produces a
  /// non-finite value.
  VehicleState step(const VehicleState& state, const ControlInput& input,
                    double traction_scale, double dt) const;

  /// Scene/conditions-shaped entry point used by the simulation loop. The
  /// scene contributes the (flat) ground; the conditions contribute traction.
  VehicleState step(const VehicleState& state, const ControlInput& input,
                    const scenario::Scene& scene, const scenario::Conditions& conditions,
                    double dt) const;

  const VehicleParams& params() const { return params_; }
  const InertiaSummary& inertia() const { return inertia_; }
  const TireSpline& tire_long() const { return tire_long_; }
  const TireSpline& tire_lat() const { return tire_lat_; }

  /// Contact normal load per corner from the current suspension state.
  double wheel_load(const VehicleState& state, int wheel) const;

 private:
  VehicleParams params_;
  InertiaSummary inertia_;
  TireSpline tire_long_;
  TireSpline tire_lat_;
  std::array<SuspensionCoefficients, 4> suspension_{};
  std::array<double, 4> wheel_inertia_{};  // 0.5 * m * R^2
};

}  // namespace vpg::dynamics
