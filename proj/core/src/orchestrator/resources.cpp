#include "vpg/orchestrator/resources.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vpg::orchestrator {

namespace {

/// utime + stime in jiffies from /proc/<pid>/stat, or nullopt when gone.
std::optional<unsigned long long> read_cpu_jiffies(int pid) {
  std::ifstream in("/proc/" + std::to_string(pid) + "/stat");
  if (!in) return std::nullopt;
  std::string content;
  std::getline(in, content);
  // Field 2 (comm) may contain spaces; skip past the closing paren.
  const auto paren = content.rfind(')');
  if (paren == std::string::npos) return std::nullopt;
  std::istringstream rest(content.substr(paren + 1));
  std::string field;
  unsigned long long utime = 0, stime = 0;
  // After comm: state is field 3; utime is field 14, stime field 15.
  for (int i = 3; i <= 15 && rest >> field; ++i) {
    if (i == 14) utime = std::stoull(field);
    if (i == 15) stime = std::stoull(field);
  }
  return utime + stime;
}

std::optional<double> read_rss_gb(int pid) {
  std::ifstream in("/proc/" + std::to_string(pid) + "/status");
  if (!in) return std::nullopt;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("VmRSS:", 0) == 0) {
      std::istringstream ls(line.substr(6));
      double kb = 0.0;
      ls >> kb;
      return kb / (1024.0 * 1024.0);
    }
  }
  return 0.0;
}

}  // namespace

ResourceSampler::ResourceSampler(double rate_hz)
    : period_s_(1.0 / rate_hz),
      start_(std::chrono::steady_clock::now()),
      last_sample_(start_) {}

void ResourceSampler::watch(int pid) { pids_.emplace(pid, PidState{}); }

void ResourceSampler::unwatch(int pid) { pids_.erase(pid); }

std::optional<kpi::ResourceSample> ResourceSampler::poll() {
  const auto now = std::chrono::steady_clock::now();
  const double since_last = std::chrono::duration<double>(now - last_sample_).count();
  if (since_last < period_s_) return std::nullopt;

  kpi::ResourceSample sample;
  sample.t_s = std::chrono::duration<double>(now - start_).count();
  const double ticks_per_s = static_cast<double>(sysconf(_SC_CLK_TCK));

  for (auto& [pid, state] : pids_) {
    const auto jiffies = read_cpu_jiffies(pid);
    if (jiffies) {
      if (state.primed && *jiffies >= state.last_jiffies) {
        const double cpu_s = static_cast<double>(*jiffies - state.last_jiffies) / ticks_per_s;
        sample.cpu_cores_busy += cpu_s / since_last;
      }
      state.last_jiffies = *jiffies;
      state.primed = true;
    }
    if (const auto rss = read_rss_gb(pid)) sample.rss_gb += *rss;
  }

  last_sample_ = now;
  samples_.push_back(sample);
  return sample;
}

kpi::ResourceSample ResourceSampler::peak() const {
  kpi::ResourceSample p;
  for (const auto& s : samples_) {
    p.t_s = std::max(p.t_s, s.t_s);
    p.cpu_cores_busy = std::max(p.cpu_cores_busy, s.cpu_cores_busy);
    p.rss_gb = std::max(p.rss_gb, s.rss_gb);
  }
  return p;
}

std::string ResourceSampler::to_csv() const {
  std::string out = "t,cpu_cores_busy,rss_gb\n";
  char buf[128];
  for (const auto& s : samples_) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.3f,%.4f\n", s.t_s, s.cpu_cores_busy, s.rss_gb);
    out += buf;
  }
  const auto p = peak();
  std::snprintf(buf, sizeof(buf), "peak,%.3f,%.4f\n", p.cpu_cores_busy, p.rss_gb);
  out += buf;
  return out;
}

}  // namespace vpg::orchestrator
