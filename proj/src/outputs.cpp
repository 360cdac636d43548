#include "uavtrust/outputs.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace uavtrust {

void write_trust_scores(std::ostream& out, std::span<const ClusterTimeline> clusters) {
  struct Row {
    std::size_t interval;
    UavId uav;
    TrustComponents tc;
    bool flagged;
  };
  std::vector<Row> rows;
  for (const auto& cluster : clusters) {
    for (const auto& e : cluster.evaluations) {
      for (const auto& [id, tc] : e.verdict.trust) {
        rows.push_back({e.verdict.interval_index, id, tc, e.verdict.flagged == id});
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.interval != b.interval ? a.interval < b.interval : a.uav < b.uav;
  });
  out << kTrustScoresHeader << '\n';
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{},{},{},{},{}\n", r.interval, r.uav, r.tc.task_trust, r.tc.energy_trust,
               r.tc.deviation_trust, r.tc.total_trust, r.flagged ? 1 : 0);
  }
}

void write_trajectories(std::ostream& out, std::span<const TelemetryRecord> telemetry) {
  out << kTrajectoriesHeader << '\n';
  for (const auto& t : telemetry) {
    fmt::print(out, "{},{},{},{},{},{},{},{}\n", t.time, t.uav, t.expected.x(), t.expected.y(),
               t.expected.z(), t.actual.x(), t.actual.y(), t.actual.z());
  }
}

nlohmann::ordered_json report_json(const MonteCarloReport& report, const ScenarioSpec& spec) {
  using ojson = nlohmann::ordered_json;
  ojson j;
  j["scenario"] = report.scenario;
  j["replications"] = report.replications;
  j["base_seed"] = report.base_seed;
  j["detection_rate"] = report.detection_rate;
  j["false_alarm_rate"] = report.false_alarm_rate;
  j["environmental_accuracy"] = report.environmental_accuracy;
  j["counts"] = {{"attacked_clusters", report.attacked_units},
                 {"detected", report.detected_units},
                 {"clean_clusters", report.clean_units},
                 {"false_alarms", report.false_alarm_units},
                 {"windy_clean_clusters", report.wind_units},
                 {"classified_environmental", report.environmental_units}};
  ojson intervals = ojson::array();
  for (std::size_t k = 0; k < report.mean_trust.size(); ++k) {
    ojson uavs = ojson::array();
    for (const auto& [id, tc] : report.mean_trust[k]) {
      uavs.push_back({{"uav_id", id},
                      {"T_task", tc.task_trust},
                      {"T_ene", tc.energy_trust},
                      {"T_dev", tc.deviation_trust},
                      {"T_total", tc.total_trust},
                      {"flag_rate", report.flag_rate[k].at(id)}});
    }
    intervals.push_back({{"interval_index", k}, {"uavs", uavs}});
  }
  j["mean_trust"] = intervals;
  j["config"] = to_json(spec);
  return j;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

std::vector<TrustScoreRow> read_trust_scores(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrustScoresHeader) {
    throw std::runtime_error("trust_scores.csv: unexpected header");
  }
  std::vector<TrustScoreRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 7) {
      throw std::runtime_error("trust_scores.csv line " + std::to_string(line_no) + ": expected 7 columns");
    }
    TrustScoreRow row;
    row.interval_index = std::stoull(cells[0]);
    row.uav = static_cast<UavId>(std::stoul(cells[1]));
    row.trust = {std::stod(cells[2]), std::stod(cells[3]), std::stod(cells[4]), std::stod(cells[5])};
    row.flagged = cells[6] == "1";
    rows.push_back(row);
  }
  return rows;
}

void emit_outputs(const std::filesystem::path& directory, const MonteCarloReport& report,
                  const ScenarioSpec& spec, const ReplicationOutcome& representative,
                  std::span<const TelemetryRecord> telemetry) {
  std::filesystem::create_directories(directory);
  auto open = [&](const char* name) {
    std::ofstream out(directory / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (directory / name).string());
    return out;
  };
  {
    auto out = open("trust_scores.csv");
    write_trust_scores(out, representative.clusters);
  }
  {
    auto out = open("trajectories.csv");
    write_trajectories(out, telemetry);
  }
  {
    auto out = open("report.json");
    out << report_json(report, spec).dump(2) << '\n';
  }
}

}  // namespace uavtrust
