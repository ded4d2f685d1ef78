// vpg: desk-scale virtual proving ground CLI.
//
// Subcommands: run, replay, report, emit-script, validate, plus the internal
// run-case entry used by the worker pool. Exit codes: 0 success, 1 execution
// failure, 2 config error.

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vpg/common/errors.hpp"
#include "vpg/orchestrator/config.hpp"
#include "vpg/orchestrator/instance.hpp"
#include "vpg/orchestrator/pool.hpp"
#include "vpg/orchestrator/scripts.hpp"
#include "vpg/orchestrator/stream.hpp"
#include "vpg/orchestrator/trace.hpp"
#include "vpg/scenario/matrix.hpp"

namespace {

namespace fs = std::filesystem;
using namespace vpg;

constexpr int kExitOk = 0;
constexpr int kExitExecutionFailure = 1;
constexpr int kExitConfigError = 2;

std::string self_executable() {
  char buf[4096];
  const ssize_t n = ::readlink("/proc/self/exe", buf, sizeof(buf) - 1);
  if (n <= 0) return "vpg";
  buf[n] = '\0';
  return buf;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

int cmd_run(const std::string& config_path, const std::string& mode_name, int workers,
            const std::string& batch, const std::string& out_dir,
            const std::string& stream_bind) {
  const auto cfg = orchestrator::load_config(config_path);
  orchestrator::CampaignOptions opts;
  opts.mode = orchestrator::run_mode_from_string(mode_name);
  opts.worker_count = workers;
  opts.out_root = out_dir;
  opts.worker_exe = self_executable();
  opts.stream_bind = stream_bind;
  if (batch != "all") opts.only_batch = std::stoi(batch);

  const auto result = orchestrator::run_campaign(cfg, config_path, opts);
  std::cout << orchestrator::report_text(&cfg, result);
  std::cout << "outputs: " << result.campaign_dir.string() << "\n";
  return result.all_executed ? kExitOk : kExitExecutionFailure;
}

int cmd_run_case(const std::string& config_path, int case_id, const std::string& case_dir,
                 const std::string& mode_name, const std::string& stream_addr) {
  const auto cfg = orchestrator::load_config(config_path);
  const auto mode = orchestrator::run_mode_from_string(mode_name);
  const auto test = orchestrator::find_case(cfg, case_id);

  orchestrator::StreamProducer producer;
  orchestrator::TracePublisher publisher;
  if (mode == orchestrator::RunMode::kLiveStream && !stream_addr.empty()) {
    producer.connect(stream_addr);
    publisher = [&producer](const std::string& line) { producer.send(line); };
  }

  const auto outcome = orchestrator::run_instance(cfg, test, mode, case_dir, publisher);
  if (!outcome.executed) {
    std::cerr << "case " << case_id << " failed to execute: " << outcome.failure_reason
              << " (last valid tick " << outcome.last_valid_tick << ")\n";
    return kExitExecutionFailure;
  }
  return kExitOk;
}

int cmd_replay(const std::string& trace_path, const std::string& out_dir) {
  const auto result = orchestrator::replay(trace_path);
  std::cout << orchestrator::verdict_text(result.verdict);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "kpi.csv", result.kpi_csv);
    write_text(fs::path(out_dir) / "verdict.txt", orchestrator::verdict_text(result.verdict));
    std::cout << "outputs: " << out_dir << "\n";
  }
  return kExitOk;
}

int cmd_report(const std::string& campaign_dir) {
  const auto result = orchestrator::regenerate_report(campaign_dir);
  std::cout << orchestrator::report_text(nullptr, result);
  return result.all_executed ? kExitOk : kExitExecutionFailure;
}

int cmd_emit_script(const std::string& config_path, const std::string& scheduler,
                    const std::string& out_file) {
  const auto cfg = orchestrator::load_config(config_path);
  const auto cases = scenario::expand_matrix(cfg.matrix, cfg.tables);
  const auto plan = scenario::make_batches(cases, cfg.matrix.batch_size);
  const auto text = orchestrator::emit_job_script(
      cfg, config_path, orchestrator::scheduler_from_string(scheduler),
      static_cast<int>(plan.batches.size()));
  if (out_file.empty()) {
    std::cout << text;
  } else {
    write_text(out_file, text);
    std::cout << "wrote " << out_file << "\n";
  }
  return kExitOk;
}

int cmd_validate(const std::string& config_path, bool dump_resolved) {
  const auto cfg = orchestrator::load_config(config_path);
  const auto cases = scenario::expand_matrix(cfg.matrix, cfg.tables);
  const auto plan = scenario::make_batches(cases, cfg.matrix.batch_size);
  std::cout << "config OK: campaign '" << cfg.campaign.name << "', " << cases.size()
            << " cases in " << plan.batches.size() << " batches of up to "
            << cfg.matrix.batch_size << "\n";
  if (dump_resolved) std::cout << orchestrator::resolved_config_json(cfg);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vpg: digital-twin virtual proving ground"};
  app.require_subcommand(1);

  std::string config_path, mode = "headless", batch = "all", out_dir = "out";
  std::string trace_path, replay_out, campaign_dir, scheduler, script_out, stream_bind;
  std::string case_dir, stream_addr;
  int workers = 0, case_id = -1;
  bool dump_resolved = false;

  auto* run = app.add_subcommand("run", "Run a campaign on the local worker pool");
  run->add_option("--config", config_path, "Campaign config file")->required();
  run->add_option("--mode", mode, "headless|record|stream")->default_val("headless");
  run->add_option("--workers", workers, "Worker process count (0: from config)");
  run->add_option("--batch", batch, "Batch index or 'all'")->default_val("all");
  run->add_option("--out", out_dir, "Output root directory")->default_val("out");
  run->add_option("--stream-bind", stream_bind, "host:port for live streaming");

  auto* run_case = app.add_subcommand("run-case", "Run a single case (worker entry)");
  run_case->add_option("--config", config_path)->required();
  run_case->add_option("--case-id", case_id)->required();
  run_case->add_option("--case-dir", case_dir)->required();
  run_case->add_option("--run-mode", mode)->default_val("headless");
  run_case->add_option("--stream-addr", stream_addr);

  auto* replay = app.add_subcommand("replay", "Recompute KPIs and verdict from a trace");
  replay->add_option("--trace", trace_path, "trace.ndjson path")->required();
  replay->add_option("--out", replay_out, "Directory for regenerated kpi.csv/verdict.txt");

  auto* report = app.add_subcommand("report", "Re-aggregate a campaign directory");
  report->add_option("--campaign", campaign_dir, "Campaign output directory")->required();

  auto* emit = app.add_subcommand("emit-script", "Emit a PBS/SLURM job-array script");
  emit->add_option("--config", config_path)->required();
  emit->add_option("--scheduler", scheduler, "pbs|slurm")->required();
  emit->add_option("--out", script_out, "Script file (stdout if omitted)");

  auto* validate = app.add_subcommand("validate", "Parse and validate a config");
  validate->add_option("--config", config_path)->required();
  validate->add_flag("--resolved", dump_resolved, "Dump the resolved config JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, mode, workers, batch, out_dir, stream_bind);
    if (run_case->parsed()) return cmd_run_case(config_path, case_id, case_dir, mode, stream_addr);
    if (replay->parsed()) return cmd_replay(trace_path, replay_out);
    if (report->parsed()) return cmd_report(campaign_dir);
    if (emit->parsed()) return cmd_emit_script(config_path, scheduler, script_out);
    if (validate->parsed()) return cmd_validate(config_path, dump_resolved);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitExecutionFailure;
  }
  return kExitOk;
}
