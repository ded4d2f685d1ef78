#include "vpg/kpi/kpi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "vpg/common/errors.hpp"

namespace vpg::kpi {

namespace {

double obstacle_gap(const Obb& ego, const scenario::Obstacle& o) {
  switch (o.kind) {
    case scenario::ShapeKind::kBox:
      return geom::box_box_gap(ego, o.as_box());
    case scenario::ShapeKind::kSphere:
      return geom::box_sphere_gap(ego, o.as_sphere());
    case scenario::ShapeKind::kPlane:
      return geom::box_plane_gap(ego, o.as_plane());
  }
  return kDtcCap;
}

bool obstacle_overlap(const Obb& ego, const scenario::Obstacle& o) {
  switch (o.kind) {
    case scenario::ShapeKind::kBox:
      return geom::box_box_overlap(ego, o.as_box());
    case scenario::ShapeKind::kSphere:
      return geom::box_sphere_overlap(ego, o.as_sphere());
    case scenario::ShapeKind::kPlane:
      return geom::box_plane_overlap(ego, o.as_plane());
  }
  return false;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

double distance_to_collision(const Obb& ego_box, const scenario::Scene& scene) {
  double best = kDtcCap;
  for (const auto& o : scene.obstacles) {
    if (o.is_ground) continue;
    best = std::min(best, obstacle_gap(ego_box, o));
  }
  return best;
}

CollisionTracker::CollisionTracker(const scenario::Scene& scene)
    : overlapping_(scene.obstacles.size(), false) {}

int CollisionTracker::update(const Obb& ego_box, const scenario::Scene& scene) {
  for (std::size_t i = 0; i < scene.obstacles.size(); ++i) {
    const auto& o = scene.obstacles[i];
    if (o.is_ground) continue;
    const bool now = obstacle_overlap(ego_box, o);
    if (now && !overlapping_[i]) ++count_;  // rising edge
    overlapping_[i] = now;
  }
  return count_;
}

Obb ego_bounding_box(const Pose& vehicle_pose, double length_m, double width_m,
                     double height_m) {
  return Obb{vehicle_pose, Vec3(length_m / 2.0, width_m / 2.0, height_m / 2.0)};
}

TestVerdict verdict(const std::vector<KpiRecord>& records, double fos_m) {
  if (records.empty()) throw InvalidParameterError("verdict: empty KPI record list");
  TestVerdict out;
  out.ticks = static_cast<int>(records.size());
  out.passed = records.back().collision_count == 0;
  for (const auto& r : records) out.min_dtc_m = std::min(out.min_dtc_m, r.dtc_m);
  out.fos_violated = out.passed && out.min_dtc_m < fos_m;
  return out;
}

AggregateOutcome aggregate_results(const std::vector<TestVerdict>& verdicts) {
  AggregateOutcome out;
  out.cumulative.sut = "cumulative";
  std::map<std::string, std::size_t> index;
  for (const auto& v : verdicts) {
    auto [it, inserted] = index.try_emplace(v.sut, out.per_sut.size());
    if (inserted) out.per_sut.push_back(SutOutcome{v.sut, 0, 0});
    auto& row = out.per_sut[it->second];
    ++row.total;
    ++out.cumulative.total;
    if (v.passed) {
      ++row.passed;
      ++out.cumulative.passed;
    }
  }
  return out;
}

SpeedupReport speedup_report(const std::vector<double>& per_case_serial_times_s,
                             double batch_wall_time_s) {
  if (batch_wall_time_s <= 0.0) {
    throw InvalidParameterError("speedup_report: wall time must be > 0");
  }
  SpeedupReport out;
  out.theoretical = static_cast<double>(per_case_serial_times_s.size());
  double total = 0.0;
  for (double t : per_case_serial_times_s) total += t;
  out.achieved = total / batch_wall_time_s;
  out.efficiency = out.theoretical > 0.0 ? out.achieved / out.theoretical : 0.0;
  return out;
}

std::string kpi_csv_header() {
  return "t,aeb_trigger,dtc,collision_count,throttle,brake,speed,lights";
}

std::string kpi_csv_row(const KpiRecord& r) {
  std::string out;
  out += fixed6(r.t_s);
  out += ',';
  out += std::to_string(r.aeb_trigger);
  out += ',';
  out += fixed6(r.dtc_m);
  out += ',';
  out += std::to_string(r.collision_count);
  out += ',';
  out += fixed6(r.throttle);
  out += ',';
  out += fixed6(r.brake);
  out += ',';
  out += fixed6(r.speed_mps);
  out += ',';
  out += dynamics::to_string(r.lights);
  return out;
}

std::vector<KpiRecord> parse_kpi_csv(const std::string& text) {
  std::vector<KpiRecord> rows;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line != kpi_csv_header()) throw Error("unexpected KPI CSV header: " + line);
      continue;
    }
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 8) throw Error("malformed KPI CSV row: " + line);
    KpiRecord r;
    r.t_s = std::stod(fields[0]);
    r.aeb_trigger = std::stoi(fields[1]);
    r.dtc_m = std::stod(fields[2]);
    r.collision_count = std::stoi(fields[3]);
    r.throttle = std::stod(fields[4]);
    r.brake = std::stod(fields[5]);
    r.speed_mps = std::stod(fields[6]);
    r.lights = dynamics::lights_from_string(fields[7]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace vpg::kpi
