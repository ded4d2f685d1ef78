#pragma once

#include <vector>

#include "vpg/common/se3.hpp"
#include "vpg/scenario/scene.hpp"
#include "vpg/sensors/noise.hpp"

namespace vpg::sensors {

struct LidarConfig {
  Pose mount = Pose::Identity();  // sensor w.r.t. vehicle
  double r_min_m = 0.5;
  double r_max_m = 120.0;
  double theta_min_rad = 0.0;
  double theta_max_rad = 0.0;
  double theta_res_rad = 0.0;
  double phi_min_rad = 0.0;
  double phi_max_rad = 0.0;
  double phi_res_rad = 0.0;
  double update_rate_hz = 10.0;

  void validate() const;
};

/// Hits in the sensor frame. Every point's range lies in [r_min, r_max].
struct PointCloud {
  std::vector<Vec3> points;
  double timestamp_s = 0.0;
};

/// Direction vector [cos(theta)cos(phi), sin(theta)cos(phi), -sin(phi)].
Vec3 ray_direction(double theta_rad, double phi_rad);

/// One ray per (theta, phi) grid cell, theta-major output ordering; nearest
/// scene intersection, thresholded to [r_min, r_max]. `max_threads` > 1
/// evaluates rays concurrently; the output ordering is identical either way.
PointCloud lidar_scan(const Pose& vehicle_pose, const LidarConfig& cfg,
                      const scenario::Scene& scene, const NoiseModel& range_noise,
                      Rng& rng, double timestamp_s = 0.0, int max_threads = 1);

}  // namespace vpg::sensors
