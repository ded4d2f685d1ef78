#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "vpg/common/errors.hpp"
#include "vpg/orchestrator/config.hpp"
#include "vpg/orchestrator/instance.hpp"
#include "vpg/orchestrator/trace.hpp"

using namespace vpg;
using namespace vpg::orchestrator;

namespace {

std::filesystem::path config_dir() {
  const char* dir = std::getenv("VPG_CONFIG_DIR");
  REQUIRE_MESSAGE(dir != nullptr, "VPG_CONFIG_DIR must point at the configs/ directory");
  return dir;
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("vpg_trace_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// One recorded case of the shipped campaign, reused across tests.
struct RecordedCase {
  std::filesystem::path dir;
  InstanceOutcome outcome;
};

RecordedCase record_case(int case_id) {
  static CampaignConfig cfg = load_config(config_dir() / "aeb_campaign.json");
  RecordedCase out;
  out.dir = fresh_dir("case" + std::to_string(case_id));
  const auto test = find_case(cfg, case_id);
  out.outcome = run_instance(cfg, test, RunMode::kRecordReplay, out.dir);
  REQUIRE(out.outcome.executed);
  return out;
}

}  // namespace

TEST_CASE("trace round trip: header and tick records") {
  TraceHeader h;
  h.campaign = "t";
  h.case_id = 3;
  h.sut = "det-A";
  h.seed = 1003;
  h.dt_s = 0.01;
  h.fos_m = 1.0;
  h.conditions =
      scenario::derive_conditions(scenario::TimeOfDay::k5am, scenario::Weather::kHeavyFog);
  h.scene = scenario::build_scene("aeb_jumpscare");
  const auto parsed = parse_trace_header(trace_header_line(h));
  CHECK(parsed.case_id == 3);
  CHECK(parsed.seed == 1003);
  CHECK(parsed.conditions.weather == scenario::Weather::kHeavyFog);
  CHECK(parsed.scene.obstacles.size() == h.scene.obstacles.size());

  TraceTick t;
  t.tick = 17;
  t.t_s = 0.18;
  t.x = 12.3456789012345;
  t.yaw = -0.0123456789;
  t.v_mps = 14.999999999999;
  t.control.brake = 1.0;
  t.control.lights = dynamics::Lights::kFog;
  t.aeb_trigger = 1;
  t.dtc_m = 42.123456789;
  const auto tick = parse_trace_tick(trace_tick_line(t));
  CHECK(tick.tick == 17);
  CHECK(tick.x == t.x);          // exact round trip
  CHECK(tick.yaw == t.yaw);
  CHECK(tick.v_mps == t.v_mps);
  CHECK(tick.dtc_m == t.dtc_m);
  CHECK(tick.aeb_trigger == 1);
  CHECK(tick.control.lights == dynamics::Lights::kFog);
}

TEST_CASE("replay reproduces the live KPI CSV and verdict byte-for-byte") {
  const auto rec = record_case(4);  // det-A, 5am, light_rain
  const auto result = replay(rec.dir / "trace.ndjson");

  CHECK(result.kpi_csv == slurp(rec.dir / "kpi.csv"));
  CHECK(verdict_text(result.verdict) == slurp(rec.dir / "verdict.txt"));
  CHECK(result.verdict.passed == rec.outcome.verdict.passed);
  CHECK(result.verdict.min_dtc_m == rec.outcome.verdict.min_dtc_m);
}

TEST_CASE("replay of a failing heavy-weather case still matches") {
  // det-B in heavy snow at 7pm: the weakest profile against the worst grip.
  static CampaignConfig cfg = load_config(config_dir() / "aeb_campaign.json");
  const auto cases = scenario::expand_matrix(cfg.matrix, cfg.tables);
  int chosen = -1;
  for (const auto& c : cases) {
    if (c.sut == "det-B" && c.conditions.weather == scenario::Weather::kHeavySnow &&
        c.conditions.time_of_day == scenario::TimeOfDay::k7pm) {
      chosen = c.id;
      break;
    }
  }
  REQUIRE(chosen >= 0);
  const auto rec = record_case(chosen);
  const auto result = replay(rec.dir / "trace.ndjson");
  CHECK(result.kpi_csv == slurp(rec.dir / "kpi.csv"));
  CHECK(verdict_text(result.verdict) == slurp(rec.dir / "verdict.txt"));
}

TEST_CASE("truncated trace: deleted line reported by number") {
  const auto rec = record_case(5);
  const std::string text = slurp(rec.dir / "trace.ndjson");

  // Remove the 4th line (tick 2).
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() > 10);
  lines.erase(lines.begin() + 3);

  const auto mutilated = rec.dir / "mutilated.ndjson";
  {
    std::ofstream out(mutilated, std::ios::binary);
    for (const auto& l : lines) out << l << "\n";
  }
  try {
    (void)replay(mutilated);
    FAIL("expected Error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 4") != std::string::npos);
    CHECK(msg.find("tick") != std::string::npos);
  }
}

TEST_CASE("corrupt trace line reported by number") {
  const auto rec = record_case(6);
  const std::string text = slurp(rec.dir / "trace.ndjson");
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  lines[5] = "{\"type\":\"tick\", garbage";
  const auto corrupt = rec.dir / "corrupt.ndjson";
  {
    std::ofstream out(corrupt, std::ios::binary);
    for (const auto& l : lines) out << l << "\n";
  }
  try {
    (void)replay(corrupt);
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 6") != std::string::npos);
  }
}

TEST_CASE("empty and headerless traces rejected") {
  const auto dir = fresh_dir("bad");
  {
    std::ofstream out(dir / "empty.ndjson");
  }
  CHECK_THROWS_AS((void)replay(dir / "empty.ndjson"), Error);
  {
    std::ofstream out(dir / "headerless.ndjson");
    out << "{\"type\":\"tick\"}\n";
  }
  CHECK_THROWS_AS((void)replay(dir / "headerless.ndjson"), Error);
  CHECK_THROWS_AS((void)replay(dir / "missing.ndjson"), Error);
}

TEST_CASE("headless mode writes KPI and verdict but no trace") {
  static CampaignConfig cfg = load_config(config_dir() / "aeb_campaign.json");
  const auto dir = fresh_dir("headless");
  const auto outcome = run_instance(cfg, find_case(cfg, 4), RunMode::kHeadless, dir);
  REQUIRE(outcome.executed);
  CHECK(std::filesystem::exists(dir / "kpi.csv"));
  CHECK(std::filesystem::exists(dir / "verdict.txt"));
  CHECK(std::filesystem::exists(dir / "meta.json"));
  CHECK_FALSE(std::filesystem::exists(dir / "trace.ndjson"));

  // Headless KPI output matches the record-mode KPI output byte for byte.
  const auto rec = record_case(4);
  CHECK(slurp(dir / "kpi.csv") == slurp(rec.dir / "kpi.csv"));
  CHECK(slurp(dir / "verdict.txt") == slurp(rec.dir / "verdict.txt"));
}

TEST_CASE("passing AEB case: dtc non-increasing from first detection, final speed zero") {
  static CampaignConfig cfg = load_config(config_dir() / "aeb_campaign.json");
  const auto cases = scenario::expand_matrix(cfg.matrix, cfg.tables);
  int chosen = -1;
  for (const auto& c : cases) {
    if (c.sut == "det-A" && c.conditions.weather == scenario::Weather::kClear &&
        c.conditions.time_of_day == scenario::TimeOfDay::k1pm) {
      chosen = c.id;
      break;
    }
  }
  REQUIRE(chosen >= 0);
  const auto rec = record_case(chosen);
  REQUIRE(rec.outcome.verdict.passed);

  std::ifstream in(rec.dir / "trace.ndjson");
  std::string line;
  std::getline(in, line);  // header
  std::vector<TraceTick> ticks;
  while (std::getline(in, line)) {
    if (!line.empty()) ticks.push_back(parse_trace_tick(line));
  }
  REQUIRE(!ticks.empty());

  int first_detection = -1;
  for (std::size_t i = 0; i < ticks.size(); ++i) {
    if (!ticks[i].detections.empty()) {
      first_detection = static_cast<int>(i);
      break;
    }
  }
  REQUIRE(first_detection >= 0);

  int stopped_at = -1;
  for (std::size_t i = static_cast<std::size_t>(first_detection); i < ticks.size(); ++i) {
    if (std::abs(ticks[i].v_mps) < 1e-3) {
      stopped_at = static_cast<int>(i);
      break;
    }
  }
  REQUIRE(stopped_at > first_detection);
  for (int i = first_detection; i < stopped_at; ++i) {
    CHECK(ticks[static_cast<std::size_t>(i) + 1].dtc_m <=
          ticks[static_cast<std::size_t>(i)].dtc_m + 1e-9);
  }
  CHECK(std::abs(ticks.back().v_mps) < 1e-3);
}

TEST_CASE("verdict text round trip") {
  kpi::TestVerdict v;
  v.case_id = 12;
  v.sut = "det-C";
  v.passed = true;
  v.min_dtc_m = 2.345678;
  v.fos_violated = false;
  v.ticks = 2345;
  const auto parsed = parse_verdict_text(verdict_text(v));
  CHECK(parsed.case_id == 12);
  CHECK(parsed.sut == "det-C");
  CHECK(parsed.passed);
  CHECK(parsed.min_dtc_m == doctest::Approx(2.345678));
  CHECK(parsed.ticks == 2345);
}
