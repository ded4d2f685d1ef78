#pragma once

#include <optional>

#include "vpg/common/se3.hpp"

namespace vpg::sensors {

/// Frustum geometry of the virtual camera. The model is geometry-only: view
/// and projection matrices plus point projection; no rasterization.
struct CameraIntrinsics {
  double near_m = 0.1;
  double far_m = 1000.0;
  double left_m = -0.1;
  double right_m = 0.1;
  double top_m = 0.1;
  double bottom_m = -0.1;
  int image_width_px = 1280;
  int image_height_px = 720;

  void validate() const;

  /// Apparent-height constant: an object of height h at range r spans
  /// h * k_proj / r of the image height.
  double height_projection_factor() const { return near_m / (top_m - bottom_m); }
};

/// View matrix: the inverse of the camera pose in the world.
Pose camera_view_matrix(const Pose& camera_pose);

/// OpenGL-style projection matrix; camera looks down -z, NDC depth maps
/// near -> -1 and far -> +1 after the perspective divide.
Mat4 camera_projection_matrix(const CameraIntrinsics& intr);

struct PixelPoint {
  double u = 0.0;      // top-left origin
  double v = 0.0;
  double depth = 0.0;  // NDC z in [-1, 1]
};

/// World point -> pixel. Returns nullopt ("culled") outside the NDC cube or
/// for degenerate w.
std::optional<PixelPoint> project_point(const Vec3& world_point, const Pose& view,
                                        const Mat4& projection, int width_px, int height_px);

}  // namespace vpg::sensors
