#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "uavtrust/fleet.hpp"
#include "uavtrust/monte_carlo.hpp"
#include "uavtrust/scenario.hpp"

namespace uavtrust {

inline constexpr const char* kTrustScoresHeader =
    "interval_index,uav_id,T_task,T_ene,T_dev,T_total,flagged";
inline constexpr const char* kTrajectoriesHeader =
    "time,uav_id,expected_x,expected_y,expected_z,actual_x,actual_y,actual_z";

void write_trust_scores(std::ostream& out, std::span<const ClusterTimeline> clusters);
void write_trajectories(std::ostream& out, std::span<const TelemetryRecord> telemetry);
nlohmann::ordered_json report_json(const MonteCarloReport& report, const ScenarioSpec& spec);

struct TrustScoreRow {
  std::size_t interval_index = 0;
  UavId uav = 0;
  TrustComponents trust{};
  bool flagged = false;
};

std::vector<TrustScoreRow> read_trust_scores(std::istream& in);

/// Writes trust_scores.csv and trajectories.csv for `representative` and
/// report.json for the whole report into `directory` (created if needed).
void emit_outputs(const std::filesystem::path& directory, const MonteCarloReport& report,
                  const ScenarioSpec& spec, const ReplicationOutcome& representative,
                  std::span<const TelemetryRecord> telemetry);

}  // namespace uavtrust
