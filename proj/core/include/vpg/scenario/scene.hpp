#pragma once

#include <string>
#include <vector>

#include "vpg/common/geometry.hpp"
#include "vpg/common/se3.hpp"

namespace vpg::scenario {

enum class ShapeKind { kBox, kSphere, kPlane };

std::string to_string(ShapeKind kind);
ShapeKind shape_kind_from_string(const std::string& name);

/// Scene primitive. Boxes use `dimensions` as full extents; spheres use
/// dimensions.x() as the radius; planes pass through the pose origin with the
/// pose +z axis as their normal.
struct Obstacle {
  std::string tag;
  ShapeKind kind = ShapeKind::kBox;
  Pose pose = Pose::Identity();
  Vec3 dimensions = Vec3::Ones();
  bool is_ground = false;

  Obb as_box() const { return Obb{pose, dimensions / 2.0}; }
  SphereShape as_sphere() const { return SphereShape{pose.translation(), dimensions.x()}; }
  PlaneShape as_plane() const {
    return PlaneShape{pose.translation(), pose.linear().col(2)};
  }
};

struct Lane {
  Pose start = Pose::Identity();
  double heading_rad = 0.0;
  double length_m = 500.0;
  double target_speed_mps = 15.0;
};

struct Scene {
  std::string name;
  std::vector<Obstacle> obstacles;  // includes exactly one ground plane
  Lane lane;
  Pose ego_spawn = Pose::Identity();

  /// Throws InvalidParameterError unless there is exactly one ground plane
  /// and all obstacle dimensions are positive.
  void validate() const;
};

/// Shipped scene registry. "aeb_jumpscare": straight 500 m lane, ego spawned
/// at the origin, stalled-vehicle box (4.5 x 1.8 x 1.5 m) centered in lane at
/// x = 300 m. Throws InvalidParameterError for unknown names.
Scene build_scene(const std::string& name);

}  // namespace vpg::scenario
