#include <benchmark/benchmark.h>

#include "vpg/common/rng.hpp"
#include "vpg/dynamics/model.hpp"
#include "vpg/kpi/kpi.hpp"
#include "vpg/scenario/scene.hpp"
#include "vpg/sensors/lidar.hpp"

using namespace vpg;

static void BM_VehicleStep(benchmark::State& state) {
  dynamics::VehicleModel model(dynamics::default_vehicle_params());
  dynamics::VehicleState s = dynamics::initial_state(model.params(), Pose::Identity());
  dynamics::ControlInput input;
  input.throttle = 0.6;
  for (auto _ : state) {
    s = model.step(s, input, 1.0, 0.01);
    benchmark::DoNotOptimize(s.body_velocity_mps);
  }
}
BENCHMARK(BM_VehicleStep);

static void BM_TireSplineEval(benchmark::State& state) {
  const auto spline = dynamics::TireSpline::fit(dynamics::SplineControlPoints{});
  double s = 0.0;
  for (auto _ : state) {
    s += 0.001;
    if (s > 0.8) s = 0.0;
    benchmark::DoNotOptimize(spline.value(s));
  }
}
BENCHMARK(BM_TireSplineEval);

static void BM_LidarScan(benchmark::State& state) {
  const auto scene = scenario::build_scene("aeb_jumpscare");
  sensors::LidarConfig cfg;
  cfg.r_min_m = 0.5;
  cfg.r_max_m = 120.0;
  cfg.theta_min_rad = -1.5;
  cfg.theta_max_rad = 1.5;
  cfg.theta_res_rad = 0.005;
  cfg.phi_min_rad = -0.2;
  cfg.phi_max_rad = 0.2;
  cfg.phi_res_rad = 0.05;
  sensors::NoiseModel off;
  Rng rng(1);
  const Pose pose = make_pose(Vec3(280, 0, 0.8), 0.0);
  for (auto _ : state) {
    const auto cloud =
        sensors::lidar_scan(pose, cfg, scene, off, rng, 0.0, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(cloud.points.size());
  }
}
BENCHMARK(BM_LidarScan)->Arg(1)->Arg(2);

static void BM_DistanceToCollision(benchmark::State& state) {
  const auto scene = scenario::build_scene("aeb_jumpscare");
  const auto ego = kpi::ego_bounding_box(make_pose(Vec3(250, 0.2, 0.8), 0.01), 4.6, 1.9, 1.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kpi::distance_to_collision(ego, scene));
  }
}
BENCHMARK(BM_DistanceToCollision);

BENCHMARK_MAIN();
