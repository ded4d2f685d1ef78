#include "vpg/sensors/ins.hpp"

#include "vpg/common/errors.hpp"

namespace vpg::sensors {

InsReading InsSensor::read(const Pose& pose, double dt) {
  if (!rotation_is_orthonormal(pose.linear())) {
    throw InvalidStateError("ins_read: pose rotation is not orthonormal");
  }
  InsReading out;
  out.position = pose.translation();
  out.orientation = Eigen::Quaterniond(pose.linear());

  if (prev_pose_ && dt > 0.0) {
    out.velocity = (pose.translation() - prev_pose_->translation()) / dt;
    // Body-frame angular rate from the relative rotation log map.
    const Mat3 rel = prev_pose_->linear().transpose() * pose.linear();
    const Eigen::AngleAxisd aa(rel);
    out.angular_rate = aa.angle() / dt * aa.axis();
  }
  prev_pose_ = pose;

  for (int i = 0; i < 3; ++i) {
    out.position[i] = noise_.position.apply(out.position[i], rng_);
    out.velocity[i] = noise_.velocity.apply(out.velocity[i], rng_);
    out.angular_rate[i] = noise_.angular_rate.apply(out.angular_rate[i], rng_);
  }
  return out;
}

}  // namespace vpg::sensors
