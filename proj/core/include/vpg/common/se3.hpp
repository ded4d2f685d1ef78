#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace vpg {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Pose = Eigen::Isometry3d;  // rigid transform in SE(3)

/// ||R^T R - I|| below tol, i.e. the rotation block is a proper rotation.
inline bool rotation_is_orthonormal(const Mat3& r, double tol = 1e-9) {
  return (r.transpose() * r - Mat3::Identity()).norm() < tol;
}

inline Pose make_pose(const Vec3& t, double yaw) {
  Pose p = Pose::Identity();
  p.linear() = Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix();
  p.translation() = t;
  return p;
}

/// Yaw (rotation about +z) extracted from the rotation block.
inline double yaw_of(const Pose& p) {
  return std::atan2(p.linear()(1, 0), p.linear()(0, 0));
}

}  // namespace vpg
