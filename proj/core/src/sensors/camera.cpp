#include "vpg/sensors/camera.hpp"

#include <cmath>

#include "vpg/common/errors.hpp"

namespace vpg::sensors {

void CameraIntrinsics::validate() const {
  if (!(0.0 < near_m && near_m < far_m)) {
    throw InvalidParameterError("camera: require 0 < near < far");
  }
  if (!(left_m < right_m)) throw InvalidParameterError("camera: require L < R");
  if (!(bottom_m < top_m)) throw InvalidParameterError("camera: require B < T");
  if (image_width_px <= 0 || image_height_px <= 0) {
    throw InvalidParameterError("camera: image dimensions must be positive");
  }
}

Pose camera_view_matrix(const Pose& camera_pose) {
  if (!rotation_is_orthonormal(camera_pose.linear())) {
    throw InvalidStateError("camera_view_matrix: rotation is not orthonormal");
  }
  return camera_pose.inverse();
}

Mat4 camera_projection_matrix(const CameraIntrinsics& intr) {
  intr.validate();
  const double n = intr.near_m, f = intr.far_m;
  const double l = intr.left_m, r = intr.right_m;
  const double t = intr.top_m, b = intr.bottom_m;
  Mat4 p = Mat4::Zero();
  p(0, 0) = 2.0 * n / (r - l);
  p(0, 2) = (r + l) / (r - l);
  p(1, 1) = 2.0 * n / (t - b);
  p(1, 2) = (t + b) / (t - b);
  p(2, 2) = -(f + n) / (f - n);
  p(2, 3) = -2.0 * f * n / (f - n);
  p(3, 2) = -1.0;
  return p;
}

std::optional<PixelPoint> project_point(const Vec3& world_point, const Pose& view,
                                        const Mat4& projection, int width_px,
                                        int height_px) {
  const Vec3 cam = view * world_point;
  const Eigen::Vector4d clip = projection * Eigen::Vector4d(cam.x(), cam.y(), cam.z(), 1.0);
  if (!(clip.w() > 0.0)) return std::nullopt;  // behind camera or at origin
  const Vec3 ndc = clip.head<3>() / clip.w();
  if (std::abs(ndc.x()) > 1.0 || std::abs(ndc.y()) > 1.0 || std::abs(ndc.z()) > 1.0) {
    return std::nullopt;
  }
  PixelPoint out;
  out.u = (ndc.x() + 1.0) * 0.5 * width_px;
  out.v = (1.0 - ndc.y()) * 0.5 * height_px;  // top-left origin
  out.depth = ndc.z();
  return out;
}

}  // namespace vpg::sensors
