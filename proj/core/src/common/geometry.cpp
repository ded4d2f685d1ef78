#include "vpg/common/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vpg::geom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Vec2 = Eigen::Vector2d;

/// XY footprint corners of a yaw-aligned box, counter-clockwise.
std::array<Vec2, 4> footprint(const Obb& box) {
  const double yaw = yaw_of(box.pose);
  const double c = std::cos(yaw), s = std::sin(yaw);
  const Vec2 center(box.pose.translation().x(), box.pose.translation().y());
  const Vec2 ex(c * box.half.x(), s * box.half.x());
  const Vec2 ey(-s * box.half.y(), c * box.half.y());
  return {center + ex + ey, center - ex + ey, center - ex - ey, center + ex - ey};
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

/// Separating-axis overlap test for two convex polygons.
bool polygons_overlap(const std::array<Vec2, 4>& pa, const std::array<Vec2, 4>& pb) {
  auto separated_on = [](const Vec2& axis, const std::array<Vec2, 4>& u,
                         const std::array<Vec2, 4>& v) {
    double umin = kInf, umax = -kInf, vmin = kInf, vmax = -kInf;
    for (const auto& p : u) {
      const double d = p.dot(axis);
      umin = std::min(umin, d);
      umax = std::max(umax, d);
    }
    for (const auto& p : v) {
      const double d = p.dot(axis);
      vmin = std::min(vmin, d);
      vmax = std::max(vmax, d);
    }
    return umax < vmin || vmax < umin;
  };
  for (const auto* poly : {&pa, &pb}) {
    for (int i = 0; i < 4; ++i) {
      const Vec2 edge = (*poly)[(i + 1) % 4] - (*poly)[i];
      const Vec2 axis(-edge.y(), edge.x());
      if (separated_on(axis, pa, pb)) return false;
    }
  }
  return true;
}

/// Exact distance between two disjoint convex polygons: min over vertex-edge
/// pairs in both directions (covers vertex-vertex and parallel-edge cases).
double polygons_distance(const std::array<Vec2, 4>& pa, const std::array<Vec2, 4>& pb) {
  if (polygons_overlap(pa, pb)) return 0.0;
  double best = kInf;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      best = std::min(best, point_segment_distance(pa[i], pb[j], pb[(j + 1) % 4]));
      best = std::min(best, point_segment_distance(pb[i], pa[j], pa[(j + 1) % 4]));
    }
  }
  return best;
}

double interval_gap(double amin, double amax, double bmin, double bmax) {
  if (amax < bmin) return bmin - amax;
  if (bmax < amin) return amin - bmax;
  return 0.0;
}

}  // namespace

std::optional<double> ray_box(const Vec3& origin, const Vec3& dir, const Obb& box) {
  // Transform into the box frame; rigid inverse keeps the parameter metric.
  const Pose inv = box.pose.inverse();
  const Vec3 o = inv * origin;
  const Vec3 d = inv.linear() * dir;

  double tmin = 0.0, tmax = kInf;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(d[i]) < 1e-15) {
      if (o[i] < -box.half[i] || o[i] > box.half[i]) return std::nullopt;
      continue;
    }
    double t0 = (-box.half[i] - o[i]) / d[i];
    double t1 = (box.half[i] - o[i]) / d[i];
    if (t0 > t1) std::swap(t0, t1);
    tmin = std::max(tmin, t0);
    tmax = std::min(tmax, t1);
    if (tmin > tmax) return std::nullopt;
  }
  return tmin;
}

std::optional<double> ray_sphere(const Vec3& origin, const Vec3& dir, const SphereShape& s) {
  const Vec3 oc = origin - s.center;
  const double b = oc.dot(dir);
  const double c = oc.squaredNorm() - s.radius * s.radius;
  const double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  double t = -b - sq;
  if (t < 0.0) t = -b + sq;
  if (t < 0.0) return std::nullopt;
  return t;
}

std::optional<double> ray_plane(const Vec3& origin, const Vec3& dir, const PlaneShape& p) {
  const double denom = dir.dot(p.normal);
  if (std::abs(denom) < 1e-15) return std::nullopt;
  const double t = (p.point - origin).dot(p.normal) / denom;
  if (t < 0.0) return std::nullopt;
  return t;
}

double point_box_distance(const Vec3& p, const Obb& box) {
  const Vec3 local = box.pose.inverse() * p;
  Vec3 excess = Vec3::Zero();
  for (int i = 0; i < 3; ++i) {
    excess[i] = std::max(0.0, std::abs(local[i]) - box.half[i]);
  }
  return excess.norm();
}

double box_box_gap(const Obb& a, const Obb& b) {
  const double dxy = polygons_distance(footprint(a), footprint(b));
  const double az = a.pose.translation().z(), bz = b.pose.translation().z();
  const double dz = interval_gap(az - a.half.z(), az + a.half.z(),
                                 bz - b.half.z(), bz + b.half.z());
  return std::hypot(dxy, dz);
}

bool box_box_overlap(const Obb& a, const Obb& b) {
  const double az = a.pose.translation().z(), bz = b.pose.translation().z();
  if (interval_gap(az - a.half.z(), az + a.half.z(), bz - b.half.z(), bz + b.half.z()) > 0.0) {
    return false;
  }
  return polygons_overlap(footprint(a), footprint(b));
}

double box_sphere_gap(const Obb& box, const SphereShape& s) {
  return std::max(0.0, point_box_distance(s.center, box) - s.radius);
}

bool box_sphere_overlap(const Obb& box, const SphereShape& s) {
  return point_box_distance(s.center, box) <= s.radius;
}

double box_plane_gap(const Obb& box, const PlaneShape& p) {
  // Clearance of the nearest vertex on the normal side of the plane.
  double lowest = kInf;
  const double yaw = yaw_of(box.pose);
  const double c = std::cos(yaw), sn = std::sin(yaw);
  const Vec3 t = box.pose.translation();
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      for (int sz : {-1, 1}) {
        const Vec3 local(sx * box.half.x(), sy * box.half.y(), sz * box.half.z());
        const Vec3 world(t.x() + c * local.x() - sn * local.y(),
                         t.y() + sn * local.x() + c * local.y(),
                         t.z() + local.z());
        lowest = std::min(lowest, (world - p.point).dot(p.normal));
      }
    }
  }
  return std::max(0.0, lowest);
}

bool box_plane_overlap(const Obb& box, const PlaneShape& p) {
  return box_plane_gap(box, p) <= 0.0;
}

}  // namespace vpg::geom
