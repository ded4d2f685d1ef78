#include <cstdlib>

#include <doctest.h>

#include "vpg/common/errors.hpp"
#include "vpg/common/rng.hpp"
#include "vpg/sut/controller.hpp"
#include "vpg/sut/detector.hpp"
#include "vpg/sut/planner.hpp"
#include "vpg/sut/stack.hpp"

using namespace vpg;
using namespace vpg::sut;

namespace {

scenario::Conditions clear_noon() {
  return scenario::derive_conditions(scenario::TimeOfDay::k1pm, scenario::Weather::kClear);
}

DetectorProfile baseline_profile() {
  DetectorProfile p;
  p.name = "test";
  p.max_detect_range_m = 100.0;
  p.confidence_slope = 1.0;
  p.miss_rate_base = 0.0;
  p.min_bbox_frac = 0.001;
  p.latency_ticks = 0;
  return p;
}

std::vector<Detection> detect_at(double range, const DetectorProfile& profile, Rng& rng,
                                 const scenario::Conditions& c) {
  return synth_detect(range, "stalled_vehicle", 1.5, 1.2, c, c.ambient_light,
                      dynamics::Lights::kOff, profile, rng);
}

}  // namespace

TEST_CASE("synth_detect: no obstacle -> empty list") {
  Rng rng(1);
  const auto c = clear_noon();
  CHECK(detect_at(-1.0, baseline_profile(), rng, c).empty());
}

TEST_CASE("synth_detect: confidence 0.5 at half the effective range") {
  Rng rng(1);
  const auto c = clear_noon();
  const auto dets = detect_at(50.0, baseline_profile(), rng, c);
  REQUIRE(dets.size() == 1);
  CHECK(dets[0].confidence == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dets[0].class_tag == "stalled_vehicle");
  // bbox fraction: h * k / r = 1.5 * 1.2 / 50.
  CHECK(dets[0].bbox_height_frac == doctest::Approx(1.5 * 1.2 / 50.0).epsilon(1e-12));
}

TEST_CASE("synth_detect: beyond the effective range -> empty regardless of rng") {
  const auto c = clear_noon();
  auto profile = baseline_profile();
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    Rng rng(seed);
    CHECK(detect_at(101.0, profile, rng, c).empty());
  }
}

TEST_CASE("synth_detect: visibility and lights bound the effective range") {
  auto profile = baseline_profile();
  profile.max_detect_range_m = 500.0;
  auto fog = scenario::derive_conditions(scenario::TimeOfDay::k1pm,
                                         scenario::Weather::kHeavyFog);
  // Fog lights under fog: 50 * 1.5 = 75 m.
  CHECK(effective_detect_range(profile, fog, fog.ambient_light, dynamics::Lights::kFog) ==
        doctest::Approx(75.0));
  // Off under 0.5 ambient costs 30%.
  CHECK(effective_detect_range(profile, fog, 0.2, dynamics::Lights::kOff) ==
        doctest::Approx(35.0));
  const auto clear = clear_noon();
  CHECK(effective_detect_range(profile, clear, 1.0, dynamics::Lights::kOff) ==
        doctest::Approx(500.0));
}

TEST_CASE("synth_detect: deterministic for a fixed seed") {
  const auto c = clear_noon();
  auto profile = baseline_profile();
  profile.miss_rate_base = 0.4;
  auto run = [&]() {
    Rng rng(777);
    std::vector<std::size_t> hits;
    for (int i = 0; i < 200; ++i) hits.push_back(detect_at(80.0, profile, rng, c).size());
    return hits;
  };
  CHECK(run() == run());
}

TEST_CASE("synth_detect: profile min_bbox_frac suppresses small boxes") {
  const auto c = clear_noon();
  auto profile = baseline_profile();
  profile.min_bbox_frac = 0.05;  // 1.8 / r >= 0.05 -> r <= 36 m
  Rng rng(1);
  CHECK(detect_at(40.0, profile, rng, c).empty());
  Rng rng2(1);
  CHECK(detect_at(30.0, profile, rng2, c).size() == 1);
}

TEST_CASE("dominance: wider range and lower miss rate never detect later") {
  auto weak = baseline_profile();
  weak.max_detect_range_m = 60.0;
  weak.miss_rate_base = 0.4;
  auto strong = weak;
  strong.max_detect_range_m = 90.0;
  strong.miss_rate_base = 0.1;

  const auto c = clear_noon();
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng_weak(seed), rng_strong(seed);
    int first_weak = -1, first_strong = -1;
    // Approach from 120 m at 0.5 m per tick.
    for (int tick = 0; tick < 220; ++tick) {
      const double range = 120.0 - 0.5 * tick;
      if (!detect_at(range, weak, rng_weak, c).empty() && first_weak < 0) first_weak = tick;
      if (!detect_at(range, strong, rng_strong, c).empty() && first_strong < 0) {
        first_strong = tick;
      }
    }
    REQUIRE(first_strong >= 0);
    if (first_weak >= 0) CHECK(first_strong <= first_weak);
  }
}

TEST_CASE("aeb_plan: empty detections keep cruising") {
  AebPlanner planner(AebPlannerConfig{});
  CHECK(planner.plan({}) == 0);
  CHECK(planner.state() == PlannerState::kCruise);
}

TEST_CASE("aeb_plan: qualifying detection triggers") {
  AebPlannerConfig cfg;
  cfg.trigger_classes = {"car"};
  cfg.min_confidence = 0.5;
  cfg.min_bbox_frac = 0.1;
  AebPlanner planner(cfg);
  Detection det{"car", 0.8, 0.3, 40.0};
  CHECK(planner.plan({det}) == 1);
  CHECK(planner.state() == PlannerState::kBrake);
}

TEST_CASE("aeb_plan: sub-threshold detections do not trigger") {
  AebPlannerConfig cfg;
  cfg.trigger_classes = {"car"};
  cfg.min_confidence = 0.5;
  cfg.min_bbox_frac = 0.1;
  AebPlanner planner(cfg);
  CHECK(planner.plan({Detection{"car", 0.4, 0.3, 40.0}}) == 0);   // low confidence
  CHECK(planner.plan({Detection{"car", 0.8, 0.05, 40.0}}) == 0);  // small box
  CHECK(planner.plan({Detection{"bike", 0.9, 0.5, 40.0}}) == 0);  // wrong class
}

TEST_CASE("aeb_plan: latched BRAKE is absorbing; unlatched releases") {
  AebPlannerConfig latched;
  latched.latch = true;
  AebPlanner a(latched);
  CHECK(a.plan({Detection{"stalled_vehicle", 0.9, 0.5, 30.0}}) == 1);
  CHECK(a.plan({}) == 1);
  CHECK(a.plan({}) == 1);

  AebPlannerConfig open;
  open.latch = false;
  AebPlanner b(open);
  CHECK(b.plan({Detection{"stalled_vehicle", 0.9, 0.5, 30.0}}) == 1);
  CHECK(b.plan({}) == 0);
}

TEST_CASE("aeb_plan: adding a detection never flips the trigger off") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Detection> dets;
    const int n = static_cast<int>(rng.uniform() * 4);
    for (int i = 0; i < n; ++i) {
      dets.push_back(Detection{rng.uniform() < 0.5 ? "stalled_vehicle" : "debris",
                               rng.uniform(), rng.uniform(), rng.uniform() * 100});
    }
    AebPlanner base{AebPlannerConfig{}};
    const int before = base.plan(dets);
    dets.push_back(Detection{"stalled_vehicle", 0.99, 0.5, 10.0});
    AebPlanner more{AebPlannerConfig{}};
    const int after = more.plan(dets);
    CHECK(after >= before);
  }
}

TEST_CASE("drive_controller: emergency, setpoint, proportional clamp") {
  const auto braking = drive_controller(1, 20.0, 15.0);
  CHECK(braking.throttle == doctest::Approx(0.0));
  CHECK(braking.brake == doctest::Approx(1.0));

  const auto cruise = drive_controller(0, 15.0, 15.0);
  CHECK(cruise.throttle == doctest::Approx(0.0));
  CHECK(cruise.brake == doctest::Approx(0.0));

  const auto launch = drive_controller(0, 0.0, 15.0, CruiseControllerConfig{0.2});
  CHECK(launch.throttle == doctest::Approx(1.0));  // 3.0 clamped
  CHECK(launch.brake == doctest::Approx(0.0));

  const auto overspeed = drive_controller(0, 20.0, 15.0, CruiseControllerConfig{0.2});
  CHECK(overspeed.throttle == doctest::Approx(0.0));
  CHECK(overspeed.brake == doctest::Approx(1.0));
}

TEST_CASE("lighting_policy: fog dominates, then ambient thresholds") {
  CHECK(lighting_policy(1.0, false) == dynamics::Lights::kOff);
  CHECK(lighting_policy(0.3, true) == dynamics::Lights::kFog);
  CHECK(lighting_policy(0.9, true) == dynamics::Lights::kFog);
  CHECK(lighting_policy(0.05, false) == dynamics::Lights::kHighBeam);
  CHECK(lighting_policy(0.3, false) == dynamics::Lights::kLowBeam);
  CHECK(lighting_policy(0.6, false) == dynamics::Lights::kOff);
}

TEST_CASE("reference stack: full determinism for identical seeds") {
  auto run = [&]() {
    ReferenceAebStack stack(baseline_profile(), AebPlannerConfig{}, CruiseControllerConfig{},
                            LightingThresholds{}, 1.2, 42);
    const auto c = clear_noon();
    std::vector<double> throttles;
    for (int i = 0; i < 300; ++i) {
      SensorFrame frame;
      frame.t_s = i * 0.01;
      frame.body_velocity_mps = 10.0;
      frame.obstacle_range_m = 150.0 - 0.5 * i;
      frame.obstacle_class = "stalled_vehicle";
      frame.obstacle_height_m = 1.5;
      frame.target_speed_mps = 15.0;
      const auto control = stack.tick(frame, c);
      throttles.push_back(control.throttle);
      throttles.push_back(control.brake);
      throttles.push_back(static_cast<double>(stack.last_trigger()));
    }
    return throttles;
  };
  CHECK(run() == run());
}

TEST_CASE("reference stack: latency delays the first surfaced detection") {
  auto profile = baseline_profile();
  profile.latency_ticks = 5;
  ReferenceAebStack stack(profile, AebPlannerConfig{}, CruiseControllerConfig{},
                          LightingThresholds{}, 1.2, 1);
  const auto c = clear_noon();
  SensorFrame frame;
  frame.body_velocity_mps = 10.0;
  frame.obstacle_range_m = 30.0;  // well inside range, miss rate 0
  frame.obstacle_class = "stalled_vehicle";
  frame.obstacle_height_m = 1.5;
  int first_tick = -1;
  for (int i = 0; i < 20; ++i) {
    stack.tick(frame, c);
    if (!stack.last_detections().empty() && first_tick < 0) first_tick = i;
  }
  CHECK(first_tick == 5);
}

TEST_CASE("latch property: once triggered, throttle stays zero") {
  ReferenceAebStack stack(baseline_profile(), AebPlannerConfig{}, CruiseControllerConfig{},
                          LightingThresholds{}, 1.2, 9);
  const auto c = clear_noon();
  bool triggered = false;
  for (int i = 0; i < 400; ++i) {
    SensorFrame frame;
    frame.body_velocity_mps = 12.0;
    frame.obstacle_range_m = 200.0 - i;  // approach, then recede after 200 ticks
    if (frame.obstacle_range_m < 1.0) frame.obstacle_range_m = 1.0;
    frame.obstacle_class = "stalled_vehicle";
    frame.obstacle_height_m = 1.5;
    frame.target_speed_mps = 15.0;
    const auto control = stack.tick(frame, c);
    if (stack.last_trigger() != 0) triggered = true;
    if (triggered) {
      CHECK(control.throttle == doctest::Approx(0.0));
      CHECK(control.brake == doctest::Approx(1.0));
    }
  }
  CHECK(triggered);
}

TEST_CASE("external SUT: line protocol round trip") {
  const char* exe = std::getenv("VPG_ECHO_SUT");
  REQUIRE_MESSAGE(exe != nullptr, "VPG_ECHO_SUT must point at the echo_sut helper");
  ExternalProcessSut sut({exe});
  const auto c = clear_noon();

  SensorFrame far_frame;
  far_frame.body_velocity_mps = 10.0;
  far_frame.obstacle_range_m = 200.0;
  far_frame.obstacle_class = "stalled_vehicle";
  const auto cruising = sut.tick(far_frame, c);
  CHECK(cruising.throttle == doctest::Approx(0.5));
  CHECK(cruising.brake == doctest::Approx(0.0));
  CHECK(sut.last_trigger() == 0);

  SensorFrame near_frame = far_frame;
  near_frame.obstacle_range_m = 40.0;
  const auto braking = sut.tick(near_frame, c);
  CHECK(braking.brake == doctest::Approx(1.0));
  CHECK(sut.last_trigger() == 1);
}

TEST_CASE("external SUT: dead child raises an error") {
  ExternalProcessSut sut({"/bin/true"});  // exits immediately
  SensorFrame frame;
  CHECK_THROWS_AS(sut.tick(frame, clear_noon()), vpg::Error);
}
