#pragma once

#include <optional>

#include "vpg/common/rng.hpp"
#include "vpg/common/se3.hpp"
#include "vpg/sensors/noise.hpp"

namespace vpg::sensors {

struct InsReading {
  Vec3 position = Vec3::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
  Vec3 velocity = Vec3::Zero();       // world frame
  Vec3 angular_rate = Vec3::Zero();   // rad/s
};

struct InsNoise {
  NoiseModel position;
  NoiseModel velocity;
  NoiseModel angular_rate;
};

/// GNSS + IMU served from the vehicle's rigid-body transform. Rates come from
/// finite-differencing successive poses at the simulation timestep, so the
/// sensor carries the previous pose between reads.
class InsSensor {
 public:
  InsSensor() : rng_(0) {}
  InsSensor(const InsNoise& noise, std::uint64_t seed) : noise_(noise), rng_(seed) {}

  /// Decomposes the pose; throws InvalidStateError for a non-orthonormal
  /// rotation. With all noise disabled the decomposition is exact.
  InsReading read(const Pose& pose, double dt);

  void reset() { prev_pose_.reset(); }

 private:
  InsNoise noise_;
  Rng rng_;
  std::optional<Pose> prev_pose_;
};

}  // namespace vpg::sensors
