#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "vpg/dynamics/state.hpp"
#include "vpg/scenario/conditions.hpp"
#include "vpg/sensors/ins.hpp"
#include "vpg/sut/controller.hpp"
#include "vpg/sut/detector.hpp"
#include "vpg/sut/planner.hpp"

namespace vpg::sut {

/// Everything the system under test sees in one tick.
struct SensorFrame {
  double t_s = 0.0;
  double body_velocity_mps = 0.0;
  std::array<std::int64_t, 4> encoder_ticks{};
  sensors::InsReading ins;
  // Synthetic perception channel for the nearest tagged obstacle; range <= 0
  // means nothing is in view.
  double obstacle_range_m = -1.0;
  std::string obstacle_class;
  double obstacle_height_m = 0.0;
  double target_speed_mps = 15.0;
  int lidar_point_count = 0;
  double lidar_min_range_m = -1.0;
};

/// Pluggable 3-stage autonomy stack, one invocation per simulation tick.
class SutInterface {
 public:
  virtual ~SutInterface() = default;
  virtual dynamics::ControlInput tick(const SensorFrame& frame,
                                      const scenario::Conditions& conditions) = 0;

  /// AEB trigger emitted alongside the last tick's control (for KPI logging).
  virtual int last_trigger() const { return 0; }
  virtual const std::vector<Detection>& last_detections() const {
    static const std::vector<Detection> kEmpty;
    return kEmpty;
  }
};

/// Reference reactive AEB stack: synthetic perception -> finite-state planner
/// -> drive-by-wire controller, plus the secondary lighting policy.
class ReferenceAebStack : public SutInterface {
 public:
  ReferenceAebStack(DetectorProfile profile, AebPlannerConfig planner_cfg,
                    CruiseControllerConfig controller_cfg, LightingThresholds lighting,
                    double height_projection_factor, std::uint64_t seed);

  dynamics::ControlInput tick(const SensorFrame& frame,
                              const scenario::Conditions& conditions) override;

  std::vector<Detection> perceive(const SensorFrame& frame,
                                  const scenario::Conditions& conditions);
  int plan(const std::vector<Detection>& detections) { return planner_.plan(detections); }
  dynamics::ControlInput act(int trigger, const SensorFrame& frame,
                             const scenario::Conditions& conditions) const;

  int last_trigger() const override { return last_trigger_; }
  const std::vector<Detection>& last_detections() const override { return last_detections_; }

 private:
  DetectorProfile profile_;
  AebPlanner planner_;
  CruiseControllerConfig controller_;
  LightingThresholds lighting_;
  double height_projection_factor_;
  Rng rng_;
  dynamics::Lights current_lights_ = dynamics::Lights::kOff;
  std::deque<std::vector<Detection>> latency_queue_;
  std::vector<Detection> last_detections_;
  int last_trigger_ = 0;
};

/// Adapter for an external SUT executable speaking the trace line protocol:
/// one sensor record per tick on stdin, one control record per tick on
/// stdout. A dead or misbehaving child raises vpg::Error.
class ExternalProcessSut : public SutInterface {
 public:
  explicit ExternalProcessSut(const std::vector<std::string>& command);
  ~ExternalProcessSut() override;

  ExternalProcessSut(const ExternalProcessSut&) = delete;
  ExternalProcessSut& operator=(const ExternalProcessSut&) = delete;

  dynamics::ControlInput tick(const SensorFrame& frame,
                              const scenario::Conditions& conditions) override;

  int last_trigger() const override { return last_trigger_; }

 private:
  int child_pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string read_buffer_;
  int last_trigger_ = 0;
};

}  // namespace vpg::sut
