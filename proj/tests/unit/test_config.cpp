#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>

#include "vpg/common/errors.hpp"
#include "vpg/orchestrator/config.hpp"
#include "vpg/scenario/matrix.hpp"

using namespace vpg;
using namespace vpg::orchestrator;

namespace {

std::filesystem::path config_dir() {
  const char* dir = std::getenv("VPG_CONFIG_DIR");
  REQUIRE_MESSAGE(dir != nullptr, "VPG_CONFIG_DIR must point at the configs/ directory");
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("shipped example config: 256 cases in 8 batches of 32") {
  const auto cfg = load_config(config_dir() / "aeb_campaign.json");
  const auto cases = scenario::expand_matrix(cfg.matrix, cfg.tables);
  CHECK(cases.size() == 256);
  const auto plan = scenario::make_batches(cases, cfg.matrix.batch_size);
  CHECK(plan.batches.size() == 8);
  for (const auto& b : plan.batches) CHECK(b.size() == 32);
  CHECK(cfg.campaign.fos_m == doctest::Approx(1.0));
  CHECK(cfg.campaign.dt_s == doctest::Approx(0.01));
  CHECK(cfg.sut.profiles.count("det-A") == 1);
  CHECK(cfg.sut.profiles.count("det-D") == 1);
}

TEST_CASE("unknown keys are rejected by name") {
  const std::string text = R"({
    "campaign": {"name": "x", "frobnicate": 3},
    "vehicle": {},
    "matrix": {"suts": ["det-A"], "times": ["1pm"], "weathers": ["clear"]}
  })";
  try {
    (void)parse_config(text, "<test>");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("frobnicate") != std::string::npos);
  }
}

TEST_CASE("missing vehicle section and missing vehicle keys are named") {
  const std::string no_vehicle = R"({
    "campaign": {"name": "x"},
    "matrix": {"suts": ["det-A"], "times": ["1pm"], "weathers": ["clear"]}
  })";
  try {
    (void)parse_config(no_vehicle, "<test>");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("vehicle") != std::string::npos);
  }

  const std::string sparse_vehicle = R"({
    "campaign": {"name": "x"},
    "vehicle": {"wheelbase": 2.8},
    "matrix": {"suts": ["det-A"], "times": ["1pm"], "weathers": ["clear"]}
  })";
  try {
    (void)parse_config(sparse_vehicle, "<test>");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("missing required keys") != std::string::npos);
    CHECK(msg.find("tire_radius") != std::string::npos);
    CHECK(msg.find("braking_distance") != std::string::npos);
    CHECK(msg.find("drag") != std::string::npos);
  }
}

TEST_CASE("parse errors carry a line number") {
  const std::string broken = "{\n  \"campaign\": {\n  \"name\" broken\n}";
  try {
    (void)parse_config(broken, "<test>");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("matrix referencing an unknown profile is rejected") {
  auto text = slurp(config_dir() / "aeb_campaign.json");
  const auto pos = text.find("det-A");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 5, "det-Z");
  CHECK_THROWS_AS((void)parse_config(text, "<test>"), ConfigError);
}

TEST_CASE("resolved config dump is stable and re-parseable") {
  const auto cfg = load_config(config_dir() / "aeb_campaign.json");
  const std::string dump = resolved_config_json(cfg);
  CHECK(dump.find("\"det-B\"") != std::string::npos);
  CHECK(dump.find("\"braking_distance\": 50.0") != std::string::npos);
  // The dump itself is a valid config carrying the same campaign.
  const auto reparsed = parse_config(dump, "<resolved>");
  CHECK(reparsed.campaign.name == cfg.campaign.name);
  CHECK(reparsed.matrix.base_seed == cfg.matrix.base_seed);
  CHECK(reparsed.vehicle.braking_distance_m == cfg.vehicle.braking_distance_m);
  CHECK(resolved_config_json(reparsed) == dump);
}

TEST_CASE("scaling config parses with an inline obstacle-free scene") {
  const auto cfg = load_config(config_dir() / "scaling_batch.json");
  const auto cases = scenario::expand_matrix(cfg.matrix, cfg.tables);
  CHECK(cases.size() == 32);
  CHECK(scenario::make_batches(cases, cfg.matrix.batch_size).batches.size() == 1);
  int non_ground = 0;
  for (const auto& o : cfg.scene.obstacles) {
    if (!o.is_ground) ++non_ground;
  }
  CHECK(non_ground == 0);
}

TEST_CASE("profile overrides merge onto shipped defaults") {
  const std::string text = R"({
    "campaign": {"name": "x"},
    "vehicle": )" + std::string(R"({
      "corners": [
        {"sprung_mass": 500, "wheel_mass": 25, "natural_frequency": 7, "damping_ratio": 0.7, "mount_position": [1.4, 0.8, 0]},
        {"sprung_mass": 500, "wheel_mass": 25, "natural_frequency": 7, "damping_ratio": 0.7, "mount_position": [1.4, -0.8, 0]},
        {"sprung_mass": 500, "wheel_mass": 25, "natural_frequency": 7, "damping_ratio": 0.7, "mount_position": [-1.4, 0.8, 0]},
        {"sprung_mass": 500, "wheel_mass": 25, "natural_frequency": 7, "damping_ratio": 0.7, "mount_position": [-1.4, -0.8, 0]}
      ],
      "wheelbase": 2.8, "track_width": 1.6, "tire_radius": 0.3, "brake_disk_radius": 0.3,
      "braking_distance": 50, "engine_torque_curve": [[800, 140], [5000, 150]],
      "forward_gear_ratios": [4.7, 3.1, 2.1, 1.6, 1.2, 1.0], "reverse_gear_ratio": -4.0,
      "final_drive_ratio": 3.5, "idle_rpm": 800, "drivetrain": "FWD", "torque_drop": 0.5,
      "steer_sensitivity": 0.6, "steer_speed_factor": -0.3, "max_steer": 0.55,
      "v_max": 30, "v_rev": -8,
      "drag": {"max": 500, "idle": 150, "rev": 250, "run": 200},
      "tire_long": {"origin": [0, 0], "extremum": [0.2, 1.0], "asymptote": [0.6, 0.75]},
      "tire_lat": {"origin": [0, 0], "extremum": [0.15, 1.0], "asymptote": [0.5, 0.8]},
      "shift_up_rpm": 4500, "shift_down_rpm": 1500,
      "body": {"length": 4.6, "width": 1.9, "height": 1.6}
    })") + R"(,
    "matrix": {"suts": ["det-B"], "times": ["1pm"], "weathers": ["clear"]},
    "sut": {"profiles": {"det-B": {"max_detect_range": 99.0}}}
  })";
  const auto cfg = parse_config(text, "<test>");
  const auto& b = cfg.sut.profiles.at("det-B").profile;
  CHECK(b.max_detect_range_m == doctest::Approx(99.0));  // overridden
  CHECK(b.miss_rate_base == doctest::Approx(0.30));      // shipped default kept
}
