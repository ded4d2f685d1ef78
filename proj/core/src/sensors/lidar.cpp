#include "vpg/sensors/lidar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>

#include "vpg/common/errors.hpp"
#include "vpg/common/geometry.hpp"

namespace vpg::sensors {

namespace {

int grid_count(double lo, double hi, double res) {
  if (hi < lo) return 0;
  return static_cast<int>(std::floor((hi - lo) / res + 1e-9)) + 1;
}

std::optional<double> nearest_hit(const Vec3& origin, const Vec3& dir,
                                  const scenario::Scene& scene) {
  std::optional<double> best;
  for (const auto& o : scene.obstacles) {
    std::optional<double> t;
    switch (o.kind) {
      case scenario::ShapeKind::kBox:
        t = geom::ray_box(origin, dir, o.as_box());
        break;
      case scenario::ShapeKind::kSphere:
        t = geom::ray_sphere(origin, dir, o.as_sphere());
        break;
      case scenario::ShapeKind::kPlane:
        t = geom::ray_plane(origin, dir, o.as_plane());
        break;
    }
    if (t && (!best || *t < *best)) best = t;
  }
  return best;
}

}  // namespace

void LidarConfig::validate() const {
  if (!(0.0 <= r_min_m && r_min_m < r_max_m)) {
    throw InvalidParameterError("lidar: require 0 <= r_min < r_max");
  }
  if (theta_res_rad <= 0.0 || phi_res_rad <= 0.0) {
    throw InvalidParameterError("lidar: angular resolutions must be > 0");
  }
}

Vec3 ray_direction(double theta_rad, double phi_rad) {
  const double cp = std::cos(phi_rad);
  return Vec3(std::cos(theta_rad) * cp, std::sin(theta_rad) * cp, -std::sin(phi_rad));
}

PointCloud lidar_scan(const Pose& vehicle_pose, const LidarConfig& cfg,
                      const scenario::Scene& scene, const NoiseModel& range_noise,
                      Rng& rng, double timestamp_s, int max_threads) {
  cfg.validate();
  const Pose sensor_pose = vehicle_pose * cfg.mount;  // ^wT_l = ^wT_v * ^vT_l
  const Vec3 origin = sensor_pose.translation();
  const Mat3 rot = sensor_pose.linear();

  const int n_theta = grid_count(cfg.theta_min_rad, cfg.theta_max_rad, cfg.theta_res_rad);
  const int n_phi = grid_count(cfg.phi_min_rad, cfg.phi_max_rad, cfg.phi_res_rad);
  const int total = n_theta * n_phi;

  // Pure geometry first, into fixed theta-major slots; noise afterwards in
  // output order so concurrent and serial scans are identical.
  constexpr double kMiss = -1.0;
  std::vector<double> ranges(static_cast<std::size_t>(total), kMiss);
  std::vector<Vec3> dirs(static_cast<std::size_t>(total));

  auto cast_span = [&](int begin, int end) {
    for (int k = begin; k < end; ++k) {
      const int ti = k / n_phi;
      const int pi = k % n_phi;
      const double theta = cfg.theta_min_rad + ti * cfg.theta_res_rad;
      const double phi = cfg.phi_min_rad + pi * cfg.phi_res_rad;
      const Vec3 d_sensor = ray_direction(theta, phi);
      dirs[static_cast<std::size_t>(k)] = d_sensor;
      const auto t = nearest_hit(origin, rot * d_sensor, scene);
      if (t) ranges[static_cast<std::size_t>(k)] = *t;
    }
  };

  if (max_threads > 1 && total > 1) {
    const int n_workers = std::min(max_threads, total);
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(n_workers));
    const int chunk = (total + n_workers - 1) / n_workers;
    for (int w = 0; w < n_workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(total, begin + chunk);
      if (begin >= end) break;
      workers.emplace_back(cast_span, begin, end);
    }
    for (auto& t : workers) t.join();
  } else {
    cast_span(0, total);
  }

  PointCloud cloud;
  cloud.timestamp_s = timestamp_s;
  cloud.points.reserve(static_cast<std::size_t>(total));
  for (int k = 0; k < total; ++k) {
    double r = ranges[static_cast<std::size_t>(k)];
    if (r < 0.0) continue;
    r = range_noise.apply(r, rng);
    if (r < cfg.r_min_m || r > cfg.r_max_m) continue;  // thresholded
    cloud.points.push_back(dirs[static_cast<std::size_t>(k)] * r);
  }
  return cloud;
}

}  // namespace vpg::sensors
