#pragma once

#include <filesystem>
#include <functional>
#include <string>

#include "vpg/kpi/kpi.hpp"
#include "vpg/orchestrator/config.hpp"
#include "vpg/scenario/matrix.hpp"

namespace vpg::orchestrator {

enum class RunMode { kHeadless, kRecordReplay, kLiveStream };

std::string to_string(RunMode mode);
RunMode run_mode_from_string(const std::string& name);

/// Receives every trace line as it is produced (live-streaming mode).
using TracePublisher = std::function<void(const std::string& line)>;

struct InstanceOutcome {
  kpi::TestVerdict verdict;
  bool executed = false;       // false: crashed/diverged before a verdict
  std::string failure_reason;
  int last_valid_tick = 0;
  double wall_time_s = 0.0;
};

/// Runs one test case to completion in the calling process and writes its
/// outputs under `case_dir`: kpi.csv + verdict.txt + meta.json always,
/// trace.ndjson for record/stream modes. The loop is sensors -> SUT ->
/// dynamics step -> KPI update until the stop condition (stationary after
/// the AEB trigger, 3 s past a collision, or the tick budget).
InstanceOutcome run_instance(const CampaignConfig& cfg, const scenario::TestCase& test,
                             RunMode mode, const std::filesystem::path& case_dir,
                             const TracePublisher& publisher = nullptr);

/// Looks up a case by id in the expanded matrix of `cfg`.
scenario::TestCase find_case(const CampaignConfig& cfg, int case_id);

/// Deterministic verdict file body (no wall-clock fields).
std::string verdict_text(const kpi::TestVerdict& v);
kpi::TestVerdict parse_verdict_text(const std::string& text);

}  // namespace vpg::orchestrator
