#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "uavtrust/fleet.hpp"
#include "uavtrust/scenario.hpp"

namespace uavtrust {

struct ReplicationOutcome {
  std::uint64_t seed = 0;
  std::vector<ClusterTimeline> clusters;

  bool operator==(const ReplicationOutcome&) const = default;
};

/// Per-(replication, cluster) scoring used by the report rates.
/// A cluster counts as detected when its attacked UAV is confirmed in at
/// least one interval overlapping the attack window and no other member is
/// ever confirmed.
bool attack_detected(const ClusterTimeline& cluster, double evaluation_interval);
/// Any member confirmed in any interval.
bool any_confirmed(const ClusterTimeline& cluster);
/// Nothing confirmed and at least half the intervals classified as an
/// environmental shift.
bool classified_environmental(const ClusterTimeline& cluster);

struct MonteCarloReport {
  std::string scenario;
  std::size_t replications = 0;
  std::uint64_t base_seed = 0;
  std::vector<ReplicationOutcome> outcomes;

  std::size_t attacked_units = 0;
  std::size_t detected_units = 0;
  std::size_t clean_units = 0;
  std::size_t false_alarm_units = 0;
  std::size_t wind_units = 0;
  std::size_t environmental_units = 0;

  double detection_rate = 0.0;
  double false_alarm_rate = 0.0;
  double environmental_accuracy = 0.0;

  // Indexed by interval; means over replications.
  std::vector<std::map<UavId, TrustComponents>> mean_trust;
  std::vector<std::map<UavId, double>> flag_rate;

  bool operator==(const MonteCarloReport&) const = default;
};

ReplicationOutcome run_replication(const ScenarioSpec& spec, std::uint64_t seed,
                                   const TelemetrySink& sink = {});

/// Reduces replication outcomes (in seed order) to a report.
MonteCarloReport aggregate(const ScenarioSpec& spec, std::vector<ReplicationOutcome> outcomes);

/// Reference implementation: replications one after another.
MonteCarloReport run_monte_carlo_serial(const ScenarioSpec& spec);

/// Replications spread over `workers` OpenMP threads (0 = runtime default).
/// Produces the same report as the serial path for any worker count.
MonteCarloReport run_monte_carlo(const ScenarioSpec& spec, int workers = 0);

}  // namespace uavtrust
