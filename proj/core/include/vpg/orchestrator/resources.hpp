#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vpg/kpi/kpi.hpp"

namespace vpg::orchestrator {

/// Samples CPU usage and resident memory of the live worker processes from
/// /proc at a fixed rate. Failures to read a pid are logged as zeros, never
/// fatal (workers exit while being sampled).
class ResourceSampler {
 public:
  explicit ResourceSampler(double rate_hz);

  void watch(int pid);
  void unwatch(int pid);

  /// Returns a sample when a full period has elapsed since the last one.
  std::optional<kpi::ResourceSample> poll();

  const std::vector<kpi::ResourceSample>& samples() const { return samples_; }

  /// Componentwise maximum over all samples (zeros when empty).
  kpi::ResourceSample peak() const;

  /// CSV with the sample rows plus a final `peak` row.
  std::string to_csv() const;

 private:
  struct PidState {
    unsigned long long last_jiffies = 0;
    bool primed = false;
  };

  double period_s_;
  std::chrono::steady_clock::time_point start_;
  std::chrono::steady_clock::time_point last_sample_;
  std::map<int, PidState> pids_;
  std::vector<kpi::ResourceSample> samples_;
};

}  // namespace vpg::orchestrator
