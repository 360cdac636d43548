#include "uavtrust/monte_carlo.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace uavtrust {

bool attack_detected(const ClusterTimeline& cluster, double evaluation_interval) {
  if (!cluster.attacked || !cluster.attack) return false;
  bool hit = false;
  for (const auto& e : cluster.evaluations) {
    const auto& confirmed = e.decision.confirmed;
    if (!confirmed) continue;
    if (*confirmed != *cluster.attacked) return false;
    const double from = static_cast<double>(e.verdict.interval_index) * evaluation_interval;
    const double to = from + evaluation_interval;
    if (cluster.attack->start < to && cluster.attack->end > from) hit = true;
  }
  return hit;
}

bool any_confirmed(const ClusterTimeline& cluster) {
  for (const auto& e : cluster.evaluations) {
    if (e.decision.confirmed) return true;
  }
  return false;
}

bool classified_environmental(const ClusterTimeline& cluster) {
  if (cluster.evaluations.empty() || any_confirmed(cluster)) return false;
  std::size_t shifted = 0;
  for (const auto& e : cluster.evaluations) {
    if (e.decision.classification == Classification::kEnvironmentalShift) ++shifted;
  }
  return 2 * shifted >= cluster.evaluations.size();
}

ReplicationOutcome run_replication(const ScenarioSpec& spec, std::uint64_t seed,
                                   const TelemetrySink& sink) {
  const MissionSetup setup = instantiate(spec, seed);
  MissionResult result = run_mission(setup, sink);
  return {seed, std::move(result.clusters)};
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MonteCarloReport aggregate(const ScenarioSpec& spec, std::vector<ReplicationOutcome> outcomes) {
  MonteCarloReport report;
  report.scenario = spec.name;
  report.replications = outcomes.size();
  report.base_seed = spec.base_seed;

  const bool windy = !spec.wind.calm();
  std::vector<std::map<UavId, TrustComponents>> sums;
  std::vector<std::map<UavId, double>> flags;
  std::vector<std::map<UavId, std::size_t>> counts;
  for (const auto& outcome : outcomes) {
    for (const auto& cluster : outcome.clusters) {
      if (cluster.attacked) {
        ++report.attacked_units;
        if (attack_detected(cluster, spec.detector.evaluation_interval)) ++report.detected_units;
      } else {
        ++report.clean_units;
        if (any_confirmed(cluster)) ++report.false_alarm_units;
        if (windy) {
          ++report.wind_units;
          if (classified_environmental(cluster)) ++report.environmental_units;
        }
      }
      for (const auto& e : cluster.evaluations) {
        const std::size_t k = e.verdict.interval_index;
        if (sums.size() <= k) {
          sums.resize(k + 1);
          flags.resize(k + 1);
          counts.resize(k + 1);
        }
        for (const auto& [id, tc] : e.verdict.trust) {
          auto& s = sums[k].try_emplace(id, TrustComponents{0.0, 0.0, 0.0, 0.0}).first->second;
          s.task_trust += tc.task_trust;
          s.energy_trust += tc.energy_trust;
          s.deviation_trust += tc.deviation_trust;
          s.total_trust += tc.total_trust;
          flags[k][id] += e.decision.confirmed == id ? 1.0 : 0.0;
          ++counts[k][id];
        }
      }
    }
  }

  report.detection_rate = ratio(report.detected_units, report.attacked_units);
  report.false_alarm_rate = ratio(report.false_alarm_units, report.clean_units);
  report.environmental_accuracy = ratio(report.environmental_units, report.wind_units);

  report.mean_trust.resize(sums.size());
  report.flag_rate.resize(sums.size());
  for (std::size_t k = 0; k < sums.size(); ++k) {
    for (const auto& [id, s] : sums[k]) {
      const auto c = static_cast<double>(counts[k][id]);
      report.mean_trust[k][id] = {s.task_trust / c, s.energy_trust / c, s.deviation_trust / c, s.total_trust / c};
      report.flag_rate[k][id] = flags[k][id] / c;
    }
  }
  report.outcomes = std::move(outcomes);
  return report;
}

MonteCarloReport run_monte_carlo_serial(const ScenarioSpec& spec) {
  std::vector<ReplicationOutcome> outcomes;
  outcomes.reserve(spec.replications);
  for (std::size_t r = 0; r < spec.replications; ++r) {
    outcomes.push_back(run_replication(spec, spec.base_seed + r));
  }
  return aggregate(spec, std::move(outcomes));
}

MonteCarloReport run_monte_carlo(const ScenarioSpec& spec, int workers) {
  (void)workers;
  const auto reps = static_cast<long long>(spec.replications);
  std::vector<ReplicationOutcome> outcomes(spec.replications);
  std::exception_ptr failure;
#ifdef _OPENMP
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (long long r = 0; r < reps; ++r) {
    try {
      outcomes[static_cast<std::size_t>(r)] = run_replication(spec, spec.base_seed + static_cast<std::uint64_t>(r));
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(uavtrust_mc_failure)
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return aggregate(spec, std::move(outcomes));
}

}  // namespace uavtrust
