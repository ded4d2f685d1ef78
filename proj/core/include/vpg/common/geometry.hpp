#pragma once

#include <array>
#include <optional>

#include "vpg/common/se3.hpp"

namespace vpg {

/// Oriented box: pose maps box frame to world, `half` holds half extents.
/// Scene poses are yaw-only (flat 2.5D world), which keeps box-box gap
/// distance exact: 2D rectangle distance combined with the z-interval gap.
struct Obb {
  Pose pose = Pose::Identity();
  Vec3 half = Vec3::Zero();
};

struct SphereShape {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
};

/// Infinite plane through `point` with unit `normal`.
struct PlaneShape {
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
};

namespace geom {

/// Ray/box intersection (slab test in box frame). Returns the smallest
/// positive hit distance, or nullopt.
std::optional<double> ray_box(const Vec3& origin, const Vec3& dir, const Obb& box);

std::optional<double> ray_sphere(const Vec3& origin, const Vec3& dir, const SphereShape& s);

std::optional<double> ray_plane(const Vec3& origin, const Vec3& dir, const PlaneShape& p);

/// Closest distance from a point to a box (0 inside).
double point_box_distance(const Vec3& p, const Obb& box);

/// Exact surface gap between two yaw-aligned boxes; 0 when overlapping.
double box_box_gap(const Obb& a, const Obb& b);

/// Overlap test for two yaw-aligned boxes (touching counts as overlap).
bool box_box_overlap(const Obb& a, const Obb& b);

/// Surface gap between a box and a sphere; 0 when overlapping.
double box_sphere_gap(const Obb& box, const SphereShape& s);

bool box_sphere_overlap(const Obb& box, const SphereShape& s);

/// Gap between a box and an infinite plane: smallest vertex clearance on the
/// normal side, 0 if any vertex is on/behind the plane.
double box_plane_gap(const Obb& box, const PlaneShape& p);

bool box_plane_overlap(const Obb& box, const PlaneShape& p);

}  // namespace geom
}  // namespace vpg
