#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vpg/dynamics/params.hpp"
#include "vpg/scenario/conditions.hpp"
#include "vpg/scenario/matrix.hpp"
#include "vpg/scenario/scene.hpp"
#include "vpg/sensors/camera.hpp"
#include "vpg/sensors/encoder.hpp"
#include "vpg/sensors/ins.hpp"
#include "vpg/sensors/lidar.hpp"
#include "vpg/sut/controller.hpp"
#include "vpg/sut/detector.hpp"
#include "vpg/sut/planner.hpp"

namespace vpg::orchestrator {

struct CampaignSettings {
  std::string name;
  double fos_m = 1.0;
  double dt_s = 0.01;
  double tick_budget_s = 120.0;
  double stop_after_stationary_s = 3.0;
  double stop_after_collision_s = 3.0;
  int worker_count = 8;
  double case_timeout_s = 300.0;
  double resource_sample_hz = 0.2;
  bool cross_batch_parallel = false;
};

struct SensorSuiteConfig {
  sensors::InsNoise ins_noise;
  sensors::EncoderConfig encoder;
  sensors::CameraIntrinsics camera;
  bool lidar_enabled = false;
  sensors::LidarConfig lidar;
  sensors::NoiseModel lidar_noise;
  int lidar_threads = 1;
};

/// A named SUT variant: either the built-in reference stack parameterized by
/// a detector profile, or an external executable on the line protocol.
struct SutVariantConfig {
  sut::DetectorProfile profile;
  std::vector<std::string> command;  // non-empty selects the external SUT
};

struct SutConfig {
  std::map<std::string, SutVariantConfig> profiles;
  sut::AebPlannerConfig planner;
  sut::CruiseControllerConfig controller;
  sut::LightingThresholds lighting;
};

struct HpcConfig {
  std::string job_name = "vpg-campaign";
  int cpus_per_task = 8;
  int mem_gb = 16;
  std::string walltime = "02:00:00";
  std::string queue = "work";
};

struct CampaignConfig {
  CampaignSettings campaign;
  dynamics::VehicleParams vehicle;
  SensorSuiteConfig sensors;
  scenario::Scene scene;
  scenario::ConditionTables tables;
  scenario::TestMatrix matrix;
  SutConfig sut;
  std::string stream_bind = "127.0.0.1:0";
  HpcConfig hpc;

  /// Cross-reference checks (profile names, worker count, scene).
  void validate() const;
};

/// Parses and validates a campaign config file. Unknown keys are rejected by
/// name; missing required keys are all named in one error; parse errors carry
/// the file position.
CampaignConfig load_config(const std::filesystem::path& path);

/// Parses a config from a JSON string (`origin` labels error messages).
CampaignConfig parse_config(const std::string& text, const std::string& origin);

/// Fully-resolved echo of the config (defaults filled), for reproducibility.
std::string resolved_config_json(const CampaignConfig& cfg);

}  // namespace vpg::orchestrator
