#include "vpg/dynamics/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vpg/common/errors.hpp"

namespace vpg::dynamics {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double interpolate_torque_curve(const std::vector<std::pair<double, double>>& curve,
                                double rpm) {
  if (rpm <= curve.front().first) return curve.front().second;
  if (rpm >= curve.back().first) return curve.back().second;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (rpm <= curve[i].first) {
      const auto& [r0, t0] = curve[i - 1];
      const auto& [r1, t1] = curve[i];
      const double u = (rpm - r0) / (r1 - r0);
      return t0 + u * (t1 - t0);
    }
  }
  return curve.back().second;
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void check_finite(double value, const char* submodel) {
  if (!std::isfinite(value)) throw SimulationDivergedError(submodel);
}

}  // namespace

double powertrain_torque(double effective_throttle, double engine_rpm, int gear,
                         const VehicleParams& params) {
  const double tau_e = interpolate_torque_curve(params.engine_torque_curve, engine_rpm);
  return tau_e * params.gear_ratio(gear) * params.final_drive_ratio * effective_throttle;
}

double smooth_throttle(double filter_state, double raw_throttle, double dt) {
  const double alpha = 1.0 - std::exp(-dt / kThrottleFilterTau);
  return filter_state + alpha * (raw_throttle - filter_state);
}

double engine_target_rpm(const std::array<double, 4>& wheel_rpm, int gear,
                         const VehicleParams& params) {
  double mean_abs = 0.0;
  for (double w : wheel_rpm) mean_abs += std::abs(w);
  mean_abs /= 4.0;
  const double target =
      params.idle_rpm + mean_abs * params.final_drive_ratio * params.gear_ratio(gear);
  return std::max(params.idle_rpm, target);
}

std::pair<double, int> update_engine_state(const VehicleState& state,
                                           const VehicleParams& params, double dt) {
  const double target = engine_target_rpm(state.wheel_rpm, state.gear, params);
  const double alpha = 1.0 - std::exp(-dt / kRpmSmoothingTau);
  double rpm = state.engine_rpm + alpha * (target - state.engine_rpm);
  rpm = std::max(params.idle_rpm, rpm);

  int gear = state.gear;
  if (gear >= 1) {  // reverse only by explicit command
    if (rpm > params.shift_up_rpm && gear < params.top_gear()) {
      ++gear;
    } else if (rpm < params.shift_down_rpm && gear > 1) {
      --gear;
    }
  }
  return {rpm, gear};
}

AxleTorques differential_split(double total_torque_nm, double steering_rad,
                               Drivetrain drivetrain, double torque_drop) {
  const double diff =
      drivetrain == Drivetrain::kAwd ? total_torque_nm / 4.0 : total_torque_nm / 2.0;
  const double delta_pos = std::max(steering_rad, 0.0);
  const double delta_neg = std::min(steering_rad, 0.0);
  const double drop_left = std::clamp(torque_drop * std::abs(delta_neg), 0.0, 0.9);
  const double drop_right = std::clamp(torque_drop * std::abs(delta_pos), 0.0, 0.9);
  return {diff * (1.0 - drop_left), diff * (1.0 - drop_right)};
}

double brake_torque(double sprung_mass_kg, double v_mps, double braking_distance_m,
                    double brake_disk_radius_m, double brake_input) {
  if (braking_distance_m <= 0.0) {
    throw InvalidParameterError("brake_torque: braking distance must be > 0");
  }
  return brake_input * (sprung_mass_kg * v_mps * v_mps) / (2.0 * braking_distance_m) *
         brake_disk_radius_m;
}

AckermannAngles ackermann_angles(double steering_rad, double wheelbase_m,
                                 double track_width_m) {
  const double t = std::tan(steering_rad);
  const double num = 2.0 * wheelbase_m * t;
  // For a left turn (delta > 0) the left wheel is inner and gets the larger
  // magnitude; the same expressions produce the mirrored pair for delta < 0.
  AckermannAngles out;
  out.left_rad = std::atan(num / (2.0 * wheelbase_m - track_width_m * t));
  out.right_rad = std::atan(num / (2.0 * wheelbase_m + track_width_m * t));
  return out;
}

double apply_steering(double steering_rad, double command_rad, double v_mps,
                      const VehicleParams& params, double dt) {
  const double command = std::clamp(command_rad, -params.max_steer_rad, params.max_steer_rad);
  const double rate = std::abs(params.steer_sensitivity_rad_s +
                               params.steer_speed_factor_rad_s * (v_mps / params.v_max_mps));
  const double max_step = rate * dt;
  const double error = command - steering_rad;
  double next = steering_rad;
  if (std::abs(error) <= max_step) {
    next = command;  // within one step: snap
  } else {
    next += sign_of(error) * max_step;
  }
  return std::clamp(next, -params.max_steer_rad, params.max_steer_rad);
}

double suspension_force(const CornerParams& corner, double z, double zdot, double road_z,
                        double road_zdot, double gravity) {
  const auto coeffs = suspension_coefficients(
      corner.sprung_mass_kg, corner.natural_frequency_rad_s, corner.damping_ratio);
  return -(coeffs.damping_n_s_m * (zdot - road_zdot) +
           coeffs.stiffness_n_m * (z - road_z)) +
         corner.wheel_mass_kg * gravity;
}

double aero_drag(double v_mps, double output_torque_nm, int gear,
                 double mean_wheel_rpm, const VehicleParams& params) {
  double magnitude;
  if (v_mps >= params.v_max_mps) {
    magnitude = params.drag.max_n;
  } else if (output_torque_nm == 0.0) {
    magnitude = params.drag.idle_n;
  } else if (v_mps >= params.v_rev_mps && gear == -1 && mean_wheel_rpm < 0.0) {
    magnitude = params.drag.rev_n;
  } else {
    magnitude = params.drag.run_n;
  }
  return -sign_of(v_mps) * magnitude;
}

double longitudinal_slip(double wheel_omega_rad_s, double tire_radius_m, double v_mps) {
  return (wheel_omega_rad_s * tire_radius_m - v_mps) /
         std::max(std::abs(v_mps), kSlipDenominatorFloor);
}

double lateral_slip(double v_lat_mps, double v_long_mps) {
  return std::atan2(v_lat_mps, std::max(std::abs(v_long_mps), kSlipDenominatorFloor));
}

VehicleModel::VehicleModel(VehicleParams params)
    : params_(std::move(params)),
      inertia_(aggregate_inertia(params_.corners)),
      tire_long_(TireSpline::fit(params_.tire_long)),
      tire_lat_(TireSpline::fit(params_.tire_lat)) {
  params_.validate();
  for (int i = 0; i < 4; ++i) {
    const auto& c = params_.corners[static_cast<std::size_t>(i)];
    suspension_[static_cast<std::size_t>(i)] = suspension_coefficients(
        c.sprung_mass_kg, c.natural_frequency_rad_s, c.damping_ratio);
    wheel_inertia_[static_cast<std::size_t>(i)] =
        0.5 * c.wheel_mass_kg * params_.tire_radius_m * params_.tire_radius_m;
  }
}

double VehicleModel::wheel_load(const VehicleState& state, int wheel) const {
  const auto i = static_cast<std::size_t>(wheel);
  const auto& c = params_.corners[i];
  const auto& k = suspension_[i];
  const double load = c.sprung_mass_kg * kGravity + k.stiffness_n_m * state.suspension_z_m[i] +
                      k.damping_n_s_m * state.suspension_zdot_mps[i];
  return std::max(0.0, load);
}

VehicleState VehicleModel::step(const VehicleState& state, const ControlInput& input,
                                const scenario::Scene& scene,
                                const scenario::Conditions& conditions, double dt) const {
  (void)scene;  // terrain beyond the flat ground plane is out of scope
  return step(state, input, conditions.traction_scale, dt);
}

VehicleState VehicleModel::step(const VehicleState& state, const ControlInput& input,
                                double traction_scale, double dt) const {
  if (dt <= 0.0) throw InvalidParameterError("step: dt must be > 0");
  state.validate(params_);

  VehicleState next = state;
  const double v = state.body_velocity_mps;
  const double v_lat = state.lateral_velocity_mps;
  const double yaw_rate = state.yaw_rate_rad_s;
  const double radius = params_.tire_radius_m;

  // Steering and per-wheel steer angles.
  next.steering_angle_rad =
      apply_steering(state.steering_angle_rad, input.steering_cmd_rad, v, params_, dt);
  const AckermannAngles front = ackermann_angles(next.steering_angle_rad,
                                                 params_.wheelbase_m, params_.track_width_m);
  const std::array<double, 4> wheel_steer{front.left_rad, front.right_rad, 0.0, 0.0};

  // Engine, transmission, powertrain torque.
  const auto [rpm, gear] = update_engine_state(state, params_, dt);
  next.engine_rpm = rpm;
  next.gear = gear;
  next.throttle_filter_state =
      smooth_throttle(state.throttle_filter_state, std::clamp(input.throttle, 0.0, 1.0), dt);
  const double tau_total =
      powertrain_torque(next.throttle_filter_state, rpm, gear, params_);
  check_finite(tau_total, "powertrain_torque");
  next.output_torque_nm = tau_total;

  // Split onto driven wheels.
  const AxleTorques axle = differential_split(tau_total, next.steering_angle_rad,
                                              params_.drivetrain, params_.torque_drop);
  std::array<double, 4> drive{};
  switch (params_.drivetrain) {
    case Drivetrain::kFwd:
      drive = {axle.left_nm, axle.right_nm, 0.0, 0.0};
      break;
    case Drivetrain::kRwd:
      drive = {0.0, 0.0, axle.left_nm, axle.right_nm};
      break;
    case Drivetrain::kAwd:
      drive = {axle.left_nm, axle.right_nm, axle.left_nm, axle.right_nm};
      break;
  }

  // Brake torque capacity per wheel (constant, 60 MPH calibration).
  const double brake_cmd = std::clamp(input.brake, 0.0, 1.0);
  std::array<double, 4> brake{};
  for (int i = 0; i < 4; ++i) {
    const auto& c = params_.corners[static_cast<std::size_t>(i)];
    double cmd = brake_cmd;
    if (input.handbrake && i >= 2) cmd = 1.0;  // handbrake: rear wheels, full
    brake[static_cast<std::size_t>(i)] =
        brake_torque(c.sprung_mass_kg, kBrakeCalibrationSpeed, params_.braking_distance_m,
                     params_.brake_disk_radius_m, cmd);
  }

  // Suspension relaxation (implicit damping; road is the flat z=0 plane).
  // Loads for the tire forces come from the pre-update suspension state.
  std::array<double, 4> load{};
  for (int i = 0; i < 4; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    load[idx] = wheel_load(state, i);
    const auto& c = params_.corners[idx];
    const auto& k = suspension_[idx];
    const double f_spring = -k.stiffness_n_m * state.suspension_z_m[idx] +
                            c.wheel_mass_kg * kGravity;
    check_finite(f_spring, "suspension_force");
    const double zdot = (state.suspension_zdot_mps[idx] + dt * f_spring / c.wheel_mass_kg) /
                        (1.0 + dt * k.damping_n_s_m / c.wheel_mass_kg);
    next.suspension_zdot_mps[idx] = zdot;
    next.suspension_z_m[idx] = state.suspension_z_m[idx] + dt * zdot;
  }

  // Aerodynamic drag case for this tick; applied inside the sub-steps as a
  // decay toward zero so drag never reverses the motion by itself.
  double mean_wheel_rpm = 0.0;
  for (double w : state.wheel_rpm) mean_wheel_rpm += w;
  mean_wheel_rpm /= 4.0;
  const double f_aero = aero_drag(v, tau_total, gear, mean_wheel_rpm, params_);
  check_finite(f_aero, "aero_drag");
  const double aero_mag = std::abs(f_aero);

  // The wheel-slip coupling is stiff near standstill (the slip denominator is
  // floored), so wheels and body velocities are integrated together in
  // sub-steps. The count is set so (a) one drive/brake impulse cannot jump
  // the slip across the rising branch of the friction curve and (b) the
  // explicit body update stays inside the slip-force stability bound.
  const double mass = inertia_.mass_kg;
  const double moi = std::max(inertia_.moi_kg_m2, 1e-9);
  const double m0_long =
      2.0 * (tire_long_.points().fe - tire_long_.points().f0) /
      (tire_long_.points().se - tire_long_.points().s0);
  const double m0_lat =
      2.0 * (tire_lat_.points().fe - tire_lat_.points().f0) /
      (tire_lat_.points().se - tire_lat_.points().s0);
  const double slope_max = std::max(m0_long, m0_lat);

  int substeps = 1;
  {
    double body_gain = 0.0;  // sum of load_i / denom_i
    for (int i = 0; i < 4; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const Vec3 arm = params_.corners[idx].mount_position_m - inertia_.com_m;
      const double vx_b = v - yaw_rate * arm.y();
      const double vy_b = v_lat + yaw_rate * arm.x();
      const double denom = std::max(std::hypot(vx_b, vy_b), kSlipDenominatorFloor);
      body_gain += load[idx] / denom;

      const double inertia = wheel_inertia_[idx];
      const double impulse = dt * (std::abs(drive[idx]) + brake[idx]) / inertia;
      const double slip_band = 0.25 * tire_long_.points().se * denom / radius;
      substeps = std::max(substeps, static_cast<int>(std::ceil(
                                        impulse / std::max(slip_band, 1e-12))));
    }
    const double lambda = slope_max * traction_scale * body_gain / mass;
    substeps = std::max(substeps, static_cast<int>(std::ceil(2.0 * dt * lambda)));
    substeps = std::clamp(substeps, 1, 256);
  }
  const double h = dt / substeps;

  std::array<double, 4> omega{};
  for (int i = 0; i < 4; ++i) {
    omega[static_cast<std::size_t>(i)] =
        state.wheel_rpm[static_cast<std::size_t>(i)] * kTwoPi / 60.0;
  }
  double vx = v;
  double vy = v_lat;
  double r = yaw_rate;
  double yaw = yaw_of(state.pose);
  Vec3 t = state.pose.translation();

  for (int sub = 0; sub < substeps; ++sub) {
    double force_x = 0.0, force_y = 0.0, moment_z = 0.0;
    for (int i = 0; i < 4; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const Vec3 arm = params_.corners[idx].mount_position_m - inertia_.com_m;
      // Contact-point velocity in body frame, then in the wheel frame.
      const double vx_b = vx - r * arm.y();
      const double vy_b = vy + r * arm.x();
      const double cg = std::cos(wheel_steer[idx]);
      const double sg = std::sin(wheel_steer[idx]);
      const double v_long = cg * vx_b + sg * vy_b;
      const double v_lat_w = -sg * vx_b + cg * vy_b;
      const double inertia = wheel_inertia_[idx];

      // Drive torque, then brake torque (opposing rotation, never reversing).
      const double omega_driven = omega[idx] + h * drive[idx] / inertia;
      const double brake_delta = h * brake[idx] / inertia;
      const double omega_braked =
          sign_of(omega_driven) * std::max(0.0, std::abs(omega_driven) - brake_delta);

      // Tire reaction pulls the wheel toward rolling, clamped at the rolling
      // speed: friction alone cannot push the wheel through zero slip.
      const double slip_x = longitudinal_slip(omega_braked, radius, v_long);
      const double f_x0 = tire_force(tire_long_, slip_x, load[idx], traction_scale);
      check_finite(f_x0, "tire_force");
      double omega_pulled = omega_braked - h * radius * f_x0 / inertia;
      const double omega_roll = v_long / radius;
      if ((omega_braked - omega_roll) * (omega_pulled - omega_roll) < 0.0) {
        omega_pulled = omega_roll;
      }
      // Ground reaction on the body matches the tire impulse on the wheel.
      const double f_x = inertia * (omega_braked - omega_pulled) / (h * radius);
      omega[idx] = omega_pulled;
      next.wheel_revolutions[idx] += omega_pulled * h / kTwoPi;

      const double slip_y = lateral_slip(v_lat_w, v_long);
      const double f_y = -tire_force(tire_lat_, slip_y, load[idx], traction_scale);
      check_finite(f_y, "tire_force");

      const double fb_x = cg * f_x - sg * f_y;
      const double fb_y = sg * f_x + cg * f_y;
      force_x += fb_x;
      force_y += fb_y;
      moment_z += arm.x() * fb_y - arm.y() * fb_x;
    }

    // Longitudinal update plus drag decay; lateral/yaw explicit; pose last.
    const double vx_mid = vx + h * (force_x / mass + r * vy);
    const double vx_next = sign_of(vx_mid) * std::max(0.0, std::abs(vx_mid) - h * aero_mag / mass);
    vy += h * (force_y / mass - r * vx);
    vx = vx_next;
    r += h * moment_z / moi;
    yaw += h * r;
    t.x() += h * (std::cos(yaw) * vx - std::sin(yaw) * vy);
    t.y() += h * (std::sin(yaw) * vx + std::cos(yaw) * vy);
  }

  check_finite(vx, "body_forces");
  check_finite(vy, "body_forces");
  check_finite(r, "body_forces");
  next.body_velocity_mps = vx;
  next.lateral_velocity_mps = vy;
  next.yaw_rate_rad_s = r;
  for (int i = 0; i < 4; ++i) {
    next.wheel_rpm[static_cast<std::size_t>(i)] =
        omega[static_cast<std::size_t>(i)] * 60.0 / kTwoPi;
  }
  next.pose = make_pose(t, yaw);
  return next;
}

}  // namespace vpg::dynamics
