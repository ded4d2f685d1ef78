#include "vpg/orchestrator/pool.hpp"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "vpg/common/errors.hpp"
#include "vpg/orchestrator/resources.hpp"
#include "vpg/orchestrator/stream.hpp"
#include "vpg/orchestrator/trace.hpp"

extern char** environ;

namespace vpg::orchestrator {

namespace {

using Clock = std::chrono::steady_clock;

struct RunningWorker {
  int pid = -1;
  int case_id = -1;
  Clock::time_point deadline;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

int spawn_worker(const std::string& exe, const std::vector<std::string>& args,
                 const std::filesystem::path& log_path) {
  std::vector<char*> argv;
  argv.push_back(const_cast<char*>(exe.c_str()));
  for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, log_path.c_str(),
                                   O_CREAT | O_WRONLY | O_TRUNC, 0644);
  posix_spawn_file_actions_adddup2(&actions, STDOUT_FILENO, STDERR_FILENO);

  pid_t pid = -1;
  const int rc = posix_spawn(&pid, exe.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) throw Error("failed to spawn worker '" + exe + "': " + std::strerror(rc));
  return pid;
}

double meta_wall_time(const std::filesystem::path& case_dir) {
  const std::string text = read_file(case_dir / "meta.json");
  if (text.empty()) return 0.0;
  try {
    const auto j = nlohmann::json::parse(text);
    return j.value("wall_time_s", 0.0);
  } catch (...) {
    return 0.0;
  }
}

std::string meta_failure_reason(const std::filesystem::path& case_dir) {
  const std::string text = read_file(case_dir / "meta.json");
  if (text.empty()) return "no meta.json written";
  try {
    const auto j = nlohmann::json::parse(text);
    const std::string reason = j.value("failure_reason", "");
    return reason.empty() ? "worker exited abnormally" : reason;
  } catch (...) {
    return "unreadable meta.json";
  }
}

}  // namespace

std::filesystem::path case_directory(const std::filesystem::path& campaign_dir, int batch,
                                     int case_id) {
  char case_name[32];
  std::snprintf(case_name, sizeof(case_name), "case_%04d", case_id);
  return campaign_dir / ("batch_" + std::to_string(batch)) / case_name;
}

std::string report_csv(const kpi::AggregateOutcome& outcome) {
  std::string out = "sut,passed,total\n";
  for (const auto& row : outcome.per_sut) {
    out += row.sut + "," + std::to_string(row.passed) + "," + std::to_string(row.total) + "\n";
  }
  out += "cumulative," + std::to_string(outcome.cumulative.passed) + "," +
         std::to_string(outcome.cumulative.total) + "\n";
  return out;
}

std::string report_text(const CampaignConfig* cfg, const CampaignResult& result) {
  std::ostringstream out;
  if (cfg != nullptr) {
    out << "Campaign: " << cfg->campaign.name << "\n";
  }
  out << "Cases executed: " << result.jobs.size() << "  (execution failures: ";
  int failures = 0;
  for (const auto& j : result.jobs) {
    if (j.status == CaseStatus::kFailed) ++failures;
  }
  out << failures << ")\n\n";

  out << "System under test   Passed   Total\n";
  char line[128];
  for (const auto& row : result.outcome.per_sut) {
    std::snprintf(line, sizeof(line), "%-18s %8d %7d\n", row.sut.c_str(), row.passed, row.total);
    out << line;
  }
  std::snprintf(line, sizeof(line), "%-18s %8d %7d\n", "cumulative",
                result.outcome.cumulative.passed, result.outcome.cumulative.total);
  out << line << "\n";

  if (!result.batches.empty()) {
    out << "Batch  Cases   Wall[s]  Serial[s]  Speedup  Efficiency  PeakCPU  PeakRSS[GB]\n";
    for (const auto& b : result.batches) {
      const double serial = b.speedup.achieved * b.wall_time_s;
      const std::string label = b.index < 0 ? "all" : std::to_string(b.index);
      if (b.resource_samples > 0) {
        std::snprintf(line, sizeof(line), "%5s %6d %9.2f %10.2f %8.2f %11.2f %8.2f %12.3f\n",
                      label.c_str(), b.cases, b.wall_time_s, serial, b.speedup.achieved,
                      b.speedup.efficiency, b.resource_peak.cpu_cores_busy,
                      b.resource_peak.rss_gb);
      } else {
        // Batch finished inside one sampling period: no telemetry rows.
        std::snprintf(line, sizeof(line), "%5s %6d %9.2f %10.2f %8.2f %11.2f %8s %12s\n",
                      label.c_str(), b.cases, b.wall_time_s, serial, b.speedup.achieved,
                      b.speedup.efficiency, "n/a", "n/a");
      }
      out << line;
    }
  }
  std::snprintf(line, sizeof(line), "\nTotal wall time: %.2f s\n", result.wall_time_s);
  out << line;
  return out.str();
}

CampaignResult run_campaign(const CampaignConfig& cfg, const std::filesystem::path& config_path,
                            const CampaignOptions& opts) {
  if (opts.worker_exe.empty()) {
    throw InvalidParameterError("run_campaign: worker executable path is required");
  }
  const auto campaign_start = Clock::now();

  CampaignResult result;
  result.campaign_dir = opts.out_root / cfg.campaign.name;
  std::filesystem::create_directories(result.campaign_dir);
  write_file(result.campaign_dir / "resolved_config.json", resolved_config_json(cfg));

  const auto cases = scenario::expand_matrix(cfg.matrix, cfg.tables);
  const auto plan = scenario::make_batches(cases, cfg.matrix.batch_size);

  // Live stream endpoint comes up before any case starts (fail fast on bind).
  StreamServer server;
  std::string stream_addr;
  if (opts.mode == RunMode::kLiveStream) {
    const std::string bind = opts.stream_bind.empty() ? cfg.stream_bind : opts.stream_bind;
    nlohmann::json meta;
    meta["type"] = "campaign_meta";
    meta["campaign"] = cfg.campaign.name;
    meta["cases"] = cases.size();
    meta["batches"] = plan.batches.size();
    server.start(bind, meta.dump());
    const auto colon = bind.rfind(':');
    stream_addr = bind.substr(0, colon) + ":" + std::to_string(server.port());
  }

  const int workers =
      std::max(1, opts.worker_count > 0 ? opts.worker_count : cfg.campaign.worker_count);

  // Job bookkeeping for every case, even ones outside the selected batch.
  std::map<int, std::size_t> job_index;
  for (std::size_t b = 0; b < plan.batches.size(); ++b) {
    for (int id : plan.batches[b]) {
      JobEntry e;
      e.case_id = id;
      e.batch = static_cast<int>(b);
      job_index[id] = result.jobs.size();
      result.jobs.push_back(e);
    }
  }

  // Batch execution order; cross-batch parallelism merges the queues.
  std::vector<std::vector<int>> rounds;
  if (cfg.campaign.cross_batch_parallel) {
    std::vector<int> all;
    for (std::size_t b = 0; b < plan.batches.size(); ++b) {
      if (opts.only_batch >= 0 && static_cast<int>(b) != opts.only_batch) continue;
      all.insert(all.end(), plan.batches[b].begin(), plan.batches[b].end());
    }
    rounds.push_back(std::move(all));
  } else {
    for (std::size_t b = 0; b < plan.batches.size(); ++b) {
      if (opts.only_batch >= 0 && static_cast<int>(b) != opts.only_batch) continue;
      rounds.push_back(plan.batches[b]);
    }
  }

  for (const auto& round : rounds) {
    if (round.empty()) continue;
    const int batch_index = job_index.count(round.front())
                                ? result.jobs[job_index[round.front()]].batch
                                : 0;
    const auto batch_start = Clock::now();
    ResourceSampler sampler(cfg.campaign.resource_sample_hz);

    std::vector<int> queued = round;
    std::vector<RunningWorker> running;
    std::size_t next = 0;

    auto spawn_next = [&]() {
      const int id = queued[next++];
      auto& job = result.jobs[job_index[id]];
      const auto dir = case_directory(result.campaign_dir, job.batch, id);
      std::filesystem::create_directories(dir);
      std::vector<std::string> args = {"run-case",
                                       "--config", config_path.string(),
                                       "--case-id", std::to_string(id),
                                       "--case-dir", dir.string(),
                                       "--run-mode", to_string(opts.mode)};
      if (!stream_addr.empty()) {
        args.push_back("--stream-addr");
        args.push_back(stream_addr);
      }
      const int pid = spawn_worker(opts.worker_exe, args, dir / "worker.log");
      job.status = CaseStatus::kRunning;
      job.worker_pid = pid;
      sampler.watch(pid);
      running.push_back(
          {pid, id, Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                       std::chrono::duration<double>(cfg.campaign.case_timeout_s))});
      if (opts.mode == RunMode::kLiveStream) {
        nlohmann::json ev;
        ev["type"] = "status";
        ev["event"] = "case_started";
        ev["case_id"] = id;
        server.publish(ev.dump());
      }
    };

    auto finish_case = [&](int case_id, bool executed_ok, const std::string& diag) {
      auto& job = result.jobs[job_index[case_id]];
      const auto dir = case_directory(result.campaign_dir, job.batch, case_id);
      kpi::TestVerdict verdict;
      bool have_verdict = false;
      if (executed_ok) {
        const std::string vtext = read_file(dir / "verdict.txt");
        if (!vtext.empty()) {
          verdict = parse_verdict_text(vtext);
          verdict.wall_time_s = meta_wall_time(dir);
          have_verdict = true;
        }
      }
      if (have_verdict) {
        job.status = CaseStatus::kDone;
        result.verdicts.push_back(verdict);
      } else {
        job.status = CaseStatus::kFailed;
        // A pre-set diagnostic (e.g. the timeout kill) wins over the generic
        // exit-status message.
        if (job.diagnostic.empty()) {
          job.diagnostic = diag.empty() ? meta_failure_reason(dir) : diag;
        }
        result.all_executed = false;
      }
      if (opts.mode == RunMode::kLiveStream) {
        nlohmann::json ev;
        ev["type"] = "status";
        ev["event"] = "case_finished";
        ev["case_id"] = case_id;
        ev["executed"] = have_verdict;
        if (have_verdict) ev["passed"] = verdict.passed;
        server.publish(ev.dump());
      }
    };

    while (next < queued.size() || !running.empty()) {
      while (next < queued.size() && static_cast<int>(running.size()) < workers) {
        spawn_next();
      }

      int status = 0;
      const pid_t reaped = ::waitpid(-1, &status, WNOHANG);
      if (reaped > 0) {
        auto it = std::find_if(running.begin(), running.end(),
                               [&](const RunningWorker& w) { return w.pid == reaped; });
        if (it != running.end()) {
          const int case_id = it->case_id;
          sampler.unwatch(it->pid);
          running.erase(it);
          if (WIFEXITED(status) && WEXITSTATUS(status) == 0) {
            finish_case(case_id, true, "");
          } else if (WIFSIGNALED(status)) {
            finish_case(case_id, false,
                        "worker killed by signal " + std::to_string(WTERMSIG(status)));
          } else {
            finish_case(case_id, false,
                        "worker exited with status " + std::to_string(WEXITSTATUS(status)));
          }
        }
        continue;  // reap eagerly before sleeping
      }

      const auto now = Clock::now();
      for (auto& w : running) {
        if (now > w.deadline) {
          ::kill(w.pid, SIGKILL);
          w.deadline = now + std::chrono::hours(24);  // reap on next waitpid
          auto& job = result.jobs[job_index[w.case_id]];
          job.diagnostic = "case timeout exceeded";
        }
      }
      sampler.poll();
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    // Final sample so short batches still record usage.
    sampler.poll();

    const double batch_wall =
        std::chrono::duration<double>(Clock::now() - batch_start).count();

    BatchStats stats;
    stats.index = cfg.campaign.cross_batch_parallel ? -1 : batch_index;
    stats.cases = static_cast<int>(round.size());
    stats.wall_time_s = batch_wall;
    std::vector<double> serial_times;
    for (int id : round) {
      const auto& job = result.jobs[job_index[id]];
      serial_times.push_back(
          meta_wall_time(case_directory(result.campaign_dir, job.batch, id)));
    }
    stats.speedup = kpi::speedup_report(serial_times, batch_wall);
    stats.resource_peak = sampler.peak();
    stats.resource_samples = static_cast<int>(sampler.samples().size());
    result.batches.push_back(stats);

    const std::string res_name = cfg.campaign.cross_batch_parallel
                                     ? "resources_all.csv"
                                     : "resources_batch" + std::to_string(batch_index) + ".csv";
    write_file(result.campaign_dir / res_name, sampler.to_csv());
  }

  result.outcome = kpi::aggregate_results(result.verdicts);
  result.wall_time_s = std::chrono::duration<double>(Clock::now() - campaign_start).count();

  write_file(result.campaign_dir / "report.csv", report_csv(result.outcome));
  write_file(result.campaign_dir / "report.txt", report_text(&cfg, result));

  if (opts.mode == RunMode::kLiveStream) {
    nlohmann::json done;
    done["type"] = "status";
    done["event"] = "campaign_finished";
    done["passed"] = result.outcome.cumulative.passed;
    done["total"] = result.outcome.cumulative.total;
    server.publish(done.dump());
    // Give subscribers a moment to drain before teardown.
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
  }
  return result;
}

CampaignResult regenerate_report(const std::filesystem::path& campaign_dir) {
  if (!std::filesystem::is_directory(campaign_dir)) {
    throw Error("not a campaign directory: " + campaign_dir.string());
  }
  CampaignResult result;
  result.campaign_dir = campaign_dir;

  std::vector<std::filesystem::path> case_dirs;
  for (const auto& batch_entry : std::filesystem::directory_iterator(campaign_dir)) {
    if (!batch_entry.is_directory()) continue;
    const std::string name = batch_entry.path().filename().string();
    if (name.rfind("batch_", 0) != 0) continue;
    for (const auto& case_entry : std::filesystem::directory_iterator(batch_entry.path())) {
      if (case_entry.is_directory()) case_dirs.push_back(case_entry.path());
    }
  }
  std::sort(case_dirs.begin(), case_dirs.end());

  for (const auto& dir : case_dirs) {
    JobEntry job;
    const std::string vtext = read_file(dir / "verdict.txt");
    if (!vtext.empty()) {
      auto v = parse_verdict_text(vtext);
      v.wall_time_s = meta_wall_time(dir);
      job.case_id = v.case_id;
      job.status = CaseStatus::kDone;
      result.verdicts.push_back(v);
    } else {
      job.status = CaseStatus::kFailed;
      job.diagnostic = meta_failure_reason(dir);
      result.all_executed = false;
    }
    result.jobs.push_back(job);
  }
  result.outcome = kpi::aggregate_results(result.verdicts);
  write_file(campaign_dir / "report.csv", report_csv(result.outcome));
  write_file(campaign_dir / "report.txt", report_text(nullptr, result));
  return result;
}

}  // namespace vpg::orchestrator
