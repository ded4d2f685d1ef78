#pragma once

#include <array>
#include <utility>
#include <vector>

#include "vpg/common/se3.hpp"
#include "vpg/dynamics/tire.hpp"

namespace vpg::dynamics {

enum class Drivetrain { kFwd, kRwd, kAwd };

/// One sprung-mass corner: mass properties plus suspension tuning.
struct CornerParams {
  double sprung_mass_kg = 500.0;
  double wheel_mass_kg = 25.0;
  double natural_frequency_rad_s = 7.0;
  double damping_ratio = 0.7;
  Vec3 mount_position_m = Vec3::Zero();  // body frame
};

struct DragForces {
  double max_n = 500.0;   // applied at/above v_max
  double idle_n = 150.0;  // coasting (zero output torque)
  double rev_n = 250.0;   // reverse operation
  double run_n = 200.0;   // normal driving
};

/// Full calibration set for the digital-twin vehicle.
struct VehicleParams {
  std::array<CornerParams, 4> corners{};  // FL, FR, RL, RR
  double wheelbase_m = 2.8;
  double track_width_m = 1.6;
  double tire_radius_m = 0.3;
  double brake_disk_radius_m = 0.3;
  double braking_distance_m = 50.0;  // calibrated at 60 MPH
  std::vector<std::pair<double, double>> engine_torque_curve{
      {800.0, 140.0}, {2000.0, 180.0},  {3500.0, 175.0},
      {5000.0, 150.0}, {5800.0, 0.0}};  // RPM -> N*m, tapers to the redline
  std::vector<double> forward_gear_ratios{4.7, 3.1, 2.1, 1.6, 1.2, 1.0};
  double reverse_gear_ratio = -4.0;
  double final_drive_ratio = 3.5;
  double idle_rpm = 800.0;
  Drivetrain drivetrain = Drivetrain::kFwd;
  double torque_drop = 0.5;
  double steer_sensitivity_rad_s = 0.6;   // kappa_delta
  double steer_speed_factor_rad_s = -0.3; // kappa_v
  double max_steer_rad = 0.55;
  double v_max_mps = 30.0;
  double v_rev_mps = -8.0;  // signed: max practical reverse velocity
  DragForces drag{};
  SplineControlPoints tire_long{};
  SplineControlPoints tire_lat{0.0, 0.0, 0.15, 1.0, 0.5, 0.8};
  double shift_up_rpm = 4500.0;
  double shift_down_rpm = 1500.0;
  // Body box used for collision geometry and camera-apparent size.
  double body_length_m = 4.6;
  double body_width_m = 1.9;
  double body_height_m = 1.6;

  /// Gear ratio for gear index g (1-based forward, -1 reverse).
  double gear_ratio(int gear) const;

  int top_gear() const { return static_cast<int>(forward_gear_ratios.size()); }

  /// Throws InvalidParameterError if any invariant fails.
  void validate() const;
};

/// Totals derived from the four corners: mass, center of mass, and the
/// moment of inertia about the COM (point-mass approximation).
struct InertiaSummary {
  double mass_kg = 0.0;
  Vec3 com_m = Vec3::Zero();
  double moi_kg_m2 = 0.0;
};

InertiaSummary aggregate_inertia(const std::array<CornerParams, 4>& corners);

struct SuspensionCoefficients {
  double stiffness_n_m = 0.0;  // K
  double damping_n_s_m = 0.0;  // B
};

/// K = M * wn^2, B = 2 * zeta * sqrt(K * M).
SuspensionCoefficients suspension_coefficients(double sprung_mass_kg,
                                               double natural_frequency_rad_s,
                                               double damping_ratio);

/// Documented default parameter set (torque curve and gear ratios are
/// placeholders; campaign configs always carry the full set explicitly).
VehicleParams default_vehicle_params();

}  // namespace vpg::dynamics
