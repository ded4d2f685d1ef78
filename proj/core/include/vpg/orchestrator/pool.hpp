#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vpg/kpi/kpi.hpp"
#include "vpg/orchestrator/config.hpp"
#include "vpg/orchestrator/instance.hpp"
#include "vpg/scenario/matrix.hpp"

namespace vpg::orchestrator {

enum class CaseStatus { kQueued, kRunning, kDone, kFailed };

/// Job-array bookkeeping: one entry per test case.
struct JobEntry {
  int case_id = 0;
  int batch = 0;
  CaseStatus status = CaseStatus::kQueued;
  int worker_pid = -1;
  std::string diagnostic;
};

struct BatchStats {
  int index = 0;
  int cases = 0;
  double wall_time_s = 0.0;
  kpi::SpeedupReport speedup;
  kpi::ResourceSample resource_peak;
  int resource_samples = 0;  // 0 for batches shorter than the sampling period
};

struct CampaignOptions {
  RunMode mode = RunMode::kHeadless;
  int worker_count = 0;                 // 0: take from config
  std::filesystem::path out_root = "out";
  int only_batch = -1;                  // -1: all batches
  std::string worker_exe;               // binary exposing `run-case`
  std::string stream_bind;              // overrides config when non-empty
};

struct CampaignResult {
  kpi::AggregateOutcome outcome;
  std::vector<kpi::TestVerdict> verdicts;  // executed cases only
  std::vector<JobEntry> jobs;
  std::vector<BatchStats> batches;
  bool all_executed = true;
  double wall_time_s = 0.0;
  std::filesystem::path campaign_dir;
};

/// Case directory: <out>/<campaign>/batch_<k>/case_<id, 4 digits>.
std::filesystem::path case_directory(const std::filesystem::path& campaign_dir, int batch,
                                     int case_id);

/// Executes the campaign: batches run sequentially, cases within a batch
/// concurrently on isolated worker processes. Writes resolved_config.json,
/// per-batch resource CSVs, and report.{csv,txt} under the campaign dir.
/// In live-streaming mode the status endpoint is bound before any case
/// starts; bind failure aborts the campaign.
CampaignResult run_campaign(const CampaignConfig& cfg, const std::filesystem::path& config_path,
                            const CampaignOptions& opts);

/// Re-aggregates an existing campaign directory from its verdict files and
/// rewrites report.{csv,txt}.
CampaignResult regenerate_report(const std::filesystem::path& campaign_dir);

std::string report_csv(const kpi::AggregateOutcome& outcome);
std::string report_text(const CampaignConfig* cfg, const CampaignResult& result);

}  // namespace vpg::orchestrator
