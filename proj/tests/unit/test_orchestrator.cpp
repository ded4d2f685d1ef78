#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <chrono>
#include <thread>

#include <doctest.h>

#include <nlohmann/json.hpp>

#include "vpg/common/errors.hpp"
#include "vpg/orchestrator/config.hpp"
#include "vpg/orchestrator/instance.hpp"
#include "vpg/orchestrator/pool.hpp"
#include "vpg/orchestrator/resources.hpp"

using namespace vpg;
using namespace vpg::orchestrator;

namespace {

namespace fs = std::filesystem;

const char* require_env(const char* name) {
  const char* value = std::getenv(name);
  REQUIRE_MESSAGE(value != nullptr, name << " must be set");
  return value;
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("vpg_orch_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file: " << p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Small 8-case campaign derived from the shipped config.
CampaignConfig small_campaign() {
  auto cfg = load_config(fs::path(require_env("VPG_CONFIG_DIR")) / "aeb_campaign.json");
  cfg.campaign.name = "small8";
  cfg.matrix.sut_variants = {"det-A", "det-B"};
  cfg.matrix.times = {scenario::TimeOfDay::k1pm, scenario::TimeOfDay::k5am};
  cfg.matrix.weathers = {scenario::Weather::kClear, scenario::Weather::kHeavyFog};
  cfg.matrix.batch_size = 4;
  cfg.sensors.lidar_enabled = false;  // keep the unit test quick
  return cfg;
}

fs::path write_config(const CampaignConfig& cfg, const fs::path& dir) {
  const auto path = dir / "config.json";
  std::ofstream out(path, std::ios::binary);
  out << resolved_config_json(cfg);
  return path;
}

CampaignOptions options_for(const fs::path& out_root, RunMode mode, int workers) {
  CampaignOptions opts;
  opts.mode = mode;
  opts.worker_count = workers;
  opts.out_root = out_root;
  opts.worker_exe = require_env("VPG_BIN");
  return opts;
}

}  // namespace

TEST_CASE("worker-pool determinism: KPI CSVs and verdicts identical across worker counts") {
  const auto dir = fresh_dir("determinism");
  const auto cfg = small_campaign();
  const auto cfg_path = write_config(cfg, dir);

  const auto serial =
      run_campaign(cfg, cfg_path, options_for(dir / "w1", RunMode::kHeadless, 1));
  const auto parallel =
      run_campaign(cfg, cfg_path, options_for(dir / "w4", RunMode::kHeadless, 4));

  CHECK(serial.all_executed);
  CHECK(parallel.all_executed);
  REQUIRE(serial.verdicts.size() == 8);
  REQUIRE(parallel.verdicts.size() == 8);

  int compared = 0;
  for (int batch = 0; batch < 2; ++batch) {
    for (int id = batch * 4; id < batch * 4 + 4; ++id) {
      const auto a = case_directory(serial.campaign_dir, batch, id);
      const auto b = case_directory(parallel.campaign_dir, batch, id);
      CHECK(slurp(a / "kpi.csv") == slurp(b / "kpi.csv"));
      CHECK(slurp(a / "verdict.txt") == slurp(b / "verdict.txt"));
      ++compared;
    }
  }
  CHECK(compared == 8);
  // Aggregated report rows are identical too (wall times live elsewhere).
  CHECK(slurp(serial.campaign_dir / "report.csv") ==
        slurp(parallel.campaign_dir / "report.csv"));
}

TEST_CASE("crash isolation: a dying SUT fails its case, siblings complete") {
  const auto dir = fresh_dir("crash");
  auto cfg = small_campaign();
  cfg.campaign.name = "crashy4";
  SutVariantConfig crashy;
  crashy.profile.name = "crashy";
  crashy.command = {require_env("VPG_CRASHY_SUT")};
  cfg.sut.profiles["crashy"] = crashy;
  cfg.matrix.sut_variants = {"det-A", "crashy"};
  cfg.matrix.times = {scenario::TimeOfDay::k1pm};
  cfg.matrix.weathers = {scenario::Weather::kClear, scenario::Weather::kCloudy};
  cfg.matrix.batch_size = 4;
  const auto cfg_path = write_config(cfg, dir);

  const auto result = run_campaign(cfg, cfg_path, options_for(dir / "out", RunMode::kHeadless, 4));
  CHECK_FALSE(result.all_executed);
  REQUIRE(result.verdicts.size() == 2);  // the two det-A cases complete
  for (const auto& v : result.verdicts) CHECK(v.sut == "det-A");

  int failed = 0;
  for (const auto& job : result.jobs) {
    if (job.status == CaseStatus::kFailed) {
      ++failed;
      CHECK_FALSE(job.diagnostic.empty());
    }
  }
  CHECK(failed == 2);

  // The healthy cases' outputs exist and parse.
  const auto v0 = parse_verdict_text(
      slurp(case_directory(result.campaign_dir, 0, 0) / "verdict.txt"));
  CHECK(v0.sut == "det-A");
}

TEST_CASE("mode layering: headless < record < stream output sets") {
  const auto dir = fresh_dir("modes");
  auto cfg = small_campaign();
  cfg.campaign.name = "modes1";
  cfg.matrix.sut_variants = {"det-A"};
  cfg.matrix.times = {scenario::TimeOfDay::k1pm};
  cfg.matrix.weathers = {scenario::Weather::kClear};
  const auto cfg_path = write_config(cfg, dir);

  auto files_of = [&](const fs::path& case_dir) {
    std::set<std::string> names;
    for (const auto& e : fs::directory_iterator(case_dir)) {
      names.insert(e.path().filename().string());
    }
    names.erase("worker.log");  // diagnostics, not a mode output
    return names;
  };

  const auto headless =
      run_campaign(cfg, cfg_path, options_for(dir / "h", RunMode::kHeadless, 1));
  const auto record =
      run_campaign(cfg, cfg_path, options_for(dir / "r", RunMode::kRecordReplay, 1));
  auto stream_opts = options_for(dir / "s", RunMode::kLiveStream, 1);
  stream_opts.stream_bind = "127.0.0.1:0";
  const auto stream = run_campaign(cfg, cfg_path, stream_opts);

  const auto h = files_of(case_directory(headless.campaign_dir, 0, 0));
  const auto r = files_of(case_directory(record.campaign_dir, 0, 0));
  const auto s = files_of(case_directory(stream.campaign_dir, 0, 0));

  CHECK(h == std::set<std::string>{"kpi.csv", "meta.json", "verdict.txt"});
  CHECK(r == std::set<std::string>{"kpi.csv", "meta.json", "trace.ndjson", "verdict.txt"});
  CHECK(s == r);  // stream adds the live endpoint, not extra files
  CHECK(std::includes(r.begin(), r.end(), h.begin(), h.end()));

  // Identical KPI output across modes.
  CHECK(slurp(case_directory(headless.campaign_dir, 0, 0) / "kpi.csv") ==
        slurp(case_directory(record.campaign_dir, 0, 0) / "kpi.csv"));
  CHECK(slurp(case_directory(record.campaign_dir, 0, 0) / "kpi.csv") ==
        slurp(case_directory(stream.campaign_dir, 0, 0) / "kpi.csv"));
}

TEST_CASE("report regeneration matches the campaign run") {
  const auto dir = fresh_dir("report");
  auto cfg = small_campaign();
  cfg.campaign.name = "report4";
  cfg.matrix.sut_variants = {"det-A", "det-B"};
  cfg.matrix.times = {scenario::TimeOfDay::k1pm};
  cfg.matrix.weathers = {scenario::Weather::kClear, scenario::Weather::kHeavyFog};
  const auto cfg_path = write_config(cfg, dir);

  const auto result = run_campaign(cfg, cfg_path, options_for(dir / "out", RunMode::kHeadless, 2));
  const auto original_csv = slurp(result.campaign_dir / "report.csv");

  const auto regenerated = regenerate_report(result.campaign_dir);
  CHECK(slurp(result.campaign_dir / "report.csv") == original_csv);
  CHECK(regenerated.outcome.cumulative.total == 4);
  CHECK(regenerated.outcome.cumulative.passed == result.outcome.cumulative.passed);
}

TEST_CASE("case timeout kills the worker and marks the case failed") {
  const auto dir = fresh_dir("timeout");
  auto cfg = load_config(fs::path(require_env("VPG_CONFIG_DIR")) / "scaling_batch.json");
  cfg.campaign.name = "timeout1";
  cfg.campaign.case_timeout_s = 0.05;  // far below the case's real runtime
  cfg.matrix.times = {scenario::TimeOfDay::k1pm};
  cfg.matrix.weathers = {scenario::Weather::kClear};
  const auto cfg_path = write_config(cfg, dir);

  const auto result = run_campaign(cfg, cfg_path, options_for(dir / "out", RunMode::kHeadless, 1));
  CHECK_FALSE(result.all_executed);
  REQUIRE(result.jobs.size() == 1);
  CHECK(result.jobs[0].status == CaseStatus::kFailed);
  CHECK(result.jobs[0].diagnostic.find("timeout") != std::string::npos);
}

TEST_CASE("CLI exit codes: success 0, config error 2, execution failure 1") {
  const auto dir = fresh_dir("cli");
  const std::string bin = require_env("VPG_BIN");

  auto cfg = small_campaign();
  cfg.campaign.name = "cli1";
  cfg.matrix.sut_variants = {"det-A"};
  cfg.matrix.times = {scenario::TimeOfDay::k1pm};
  cfg.matrix.weathers = {scenario::Weather::kClear};
  const auto cfg_path = write_config(cfg, dir);

  auto run_cli = [&](const std::string& args) {
    const std::string cmd = bin + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
  };

  CHECK(run_cli("validate --config " + cfg_path.string()) == 0);
  CHECK(run_cli("run --config " + cfg_path.string() + " --mode headless --workers 1 --out " +
                (dir / "out").string()) == 0);

  const auto bad_cfg = dir / "bad.json";
  {
    std::ofstream out(bad_cfg);
    out << "{\"campaign\": {\"nom\": 1}}";
  }
  CHECK(run_cli("validate --config " + bad_cfg.string()) == 2);
  CHECK(run_cli("run --config " + bad_cfg.string()) == 2);

  // Execution failure: crashing SUT.
  auto crash_cfg = small_campaign();
  crash_cfg.campaign.name = "cli_crash";
  SutVariantConfig crashy;
  crashy.profile.name = "crashy";
  crashy.command = {require_env("VPG_CRASHY_SUT")};
  crash_cfg.sut.profiles["crashy"] = crashy;
  crash_cfg.matrix.sut_variants = {"crashy"};
  crash_cfg.matrix.times = {scenario::TimeOfDay::k1pm};
  crash_cfg.matrix.weathers = {scenario::Weather::kClear};
  const auto crash_path = dir / "crash.json";
  {
    std::ofstream out(crash_path);
    out << resolved_config_json(crash_cfg);
  }
  CHECK(run_cli("run --config " + crash_path.string() + " --workers 1 --out " +
                (dir / "out2").string()) == 1);
}

TEST_CASE("resource sampler reads /proc and its peak dominates every sample") {
  ResourceSampler sampler(20.0);  // 50 ms period keeps the test quick
  sampler.watch(static_cast<int>(::getpid()));

  // Busy work between polls so the CPU fraction is visibly nonzero.
  int taken = 0;
  volatile double sink = 0.0;
  const auto start = std::chrono::steady_clock::now();
  while (taken < 4 &&
         std::chrono::steady_clock::now() - start < std::chrono::seconds(5)) {
    for (int i = 0; i < 200000; ++i) sink += static_cast<double>(i) * 1e-9;
    if (sampler.poll()) ++taken;
  }
  REQUIRE(taken == 4);
  REQUIRE(sampler.samples().size() == 4);

  const auto peak = sampler.peak();
  CHECK(peak.rss_gb > 0.0);
  bool any_cpu = false;
  for (const auto& s : sampler.samples()) {
    CHECK(peak.cpu_cores_busy >= s.cpu_cores_busy);
    CHECK(peak.rss_gb >= s.rss_gb);
    if (s.cpu_cores_busy > 0.05) any_cpu = true;
  }
  CHECK(any_cpu);

  // The CSV carries one row per sample plus the trailing peak row.
  const auto csv = sampler.to_csv();
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);  // header + 4 + peak
  CHECK(csv.find("peak,") != std::string::npos);

  // Vanished pids are skipped, never fatal.
  sampler.watch(99999999);
  std::this_thread::sleep_for(std::chrono::milliseconds(60));
  CHECK(sampler.poll().has_value());
}

TEST_CASE("zero selected cases yield an empty report and success") {
  const auto dir = fresh_dir("empty");
  const auto cfg = small_campaign();
  const auto cfg_path = write_config(cfg, dir);

  auto opts = options_for(dir / "out", RunMode::kHeadless, 1);
  opts.only_batch = 99;  // beyond the 2-batch plan: nothing to run
  const auto result = run_campaign(cfg, cfg_path, opts);
  CHECK(result.all_executed);
  CHECK(result.verdicts.empty());
  CHECK(result.outcome.cumulative.total == 0);
  CHECK(fs::exists(result.campaign_dir / "report.csv"));

  // Re-aggregating an empty campaign directory is also a success.
  const auto regenerated = regenerate_report(result.campaign_dir);
  CHECK(regenerated.outcome.cumulative.total == 0);
  CHECK(regenerated.all_executed);
}

TEST_CASE("batch selection runs only the requested batch") {
  const auto dir = fresh_dir("batchsel");
  const auto cfg = small_campaign();
  const auto cfg_path = write_config(cfg, dir);

  auto opts = options_for(dir / "out", RunMode::kHeadless, 2);
  opts.only_batch = 1;
  const auto result = run_campaign(cfg, cfg_path, opts);
  CHECK(result.verdicts.size() == 4);
  CHECK(fs::exists(case_directory(result.campaign_dir, 1, 4)));
  CHECK_FALSE(fs::exists(case_directory(result.campaign_dir, 0, 0)));
  // Only the selected batch's resource file is written.
  CHECK(fs::exists(result.campaign_dir / "resources_batch1.csv"));
  CHECK_FALSE(fs::exists(result.campaign_dir / "resources_batch0.csv"));
}
