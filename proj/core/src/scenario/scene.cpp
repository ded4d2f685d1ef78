#include "vpg/scenario/scene.hpp"

#include "vpg/common/errors.hpp"

namespace vpg::scenario {

std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::kBox: return "box";
    case ShapeKind::kSphere: return "sphere";
    case ShapeKind::kPlane: return "plane";
  }
  return "box";
}

ShapeKind shape_kind_from_string(const std::string& name) {
  if (name == "box") return ShapeKind::kBox;
  if (name == "sphere") return ShapeKind::kSphere;
  if (name == "plane") return ShapeKind::kPlane;
  throw InvalidParameterError("unknown shape kind: " + name);
}

void Scene::validate() const {
  int ground_count = 0;
  for (const auto& o : obstacles) {
    if (o.is_ground) {
      ++ground_count;
      if (o.kind != ShapeKind::kPlane) {
        throw InvalidParameterError("ground obstacle must be a plane");
      }
    }
    if (o.kind == ShapeKind::kBox &&
        (o.dimensions.x() <= 0.0 || o.dimensions.y() <= 0.0 || o.dimensions.z() <= 0.0)) {
      throw InvalidParameterError("box obstacle dimensions must be > 0: " + o.tag);
    }
    if (o.kind == ShapeKind::kSphere && o.dimensions.x() <= 0.0) {
      throw InvalidParameterError("sphere radius must be > 0: " + o.tag);
    }
  }
  if (ground_count != 1) {
    throw InvalidParameterError("scene must contain exactly one ground plane");
  }
}

Scene build_scene(const std::string& name) {
  if (name == "aeb_jumpscare") {
    Scene scene;
    scene.name = name;
    Obstacle ground;
    ground.tag = "ground";
    ground.kind = ShapeKind::kPlane;
    ground.is_ground = true;
    scene.obstacles.push_back(ground);

    Obstacle stalled;
    stalled.tag = "stalled_vehicle";
    stalled.kind = ShapeKind::kBox;
    stalled.pose = make_pose(Vec3(300.0, 0.0, 0.75), 0.0);
    stalled.dimensions = Vec3(4.5, 1.8, 1.5);
    scene.obstacles.push_back(stalled);

    scene.lane.start = Pose::Identity();
    scene.lane.heading_rad = 0.0;
    scene.lane.length_m = 500.0;
    scene.lane.target_speed_mps = 15.0;
    scene.ego_spawn = make_pose(Vec3(0.0, 0.0, 0.8), 0.0);
    scene.validate();
    return scene;
  }
  throw InvalidParameterError("unknown scene name: '" + name + "'");
}

}  // namespace vpg::scenario
