#include "uavtrust/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "uavtrust/errors.hpp"

namespace uavtrust {

void DetectorConfig::validate() const {
  if (!(evaluation_interval > 0.0)) {
    throw ValidationError("evaluation_interval > 0", std::to_string(evaluation_interval));
  }
  if (!(range_threshold > 0.0)) {
    throw ValidationError("range_threshold > 0", std::to_string(range_threshold));
  }
  if (alpha == 0) throw ValidationError("alpha >= 1", "got 0");
  if (persistence == 0) throw ValidationError("persistence >= 1", "got 0");
  if (!(environmental_deviation >= 0.0)) {
    throw ValidationError("environmental_deviation >= 0", std::to_string(environmental_deviation));
  }
  weights.validate();
}

std::string_view to_string(Classification c) noexcept {
  switch (c) {
    case Classification::kClear: return "clear";
    case Classification::kAttackFlagged: return "attack-flagged";
    case Classification::kEnvironmentalShift: return "environmental-shift";
  }
  return "unknown";
}

OutlierResult find_outlier(std::span<const double> scores, double tau) {
  const std::size_t n = scores.size();
  if (n < 3) {
    throw ClusterTooSmallError("range comparison needs at least 3 UAVs, got " + std::to_string(n));
  }

  std::optional<std::size_t> best;
  double best_gap = 0.0;
  bool tied = false;
  std::vector<double> others;
  others.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    others.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others.push_back(scores[j]);
    }
    // summed in sorted order
    std::sort(others.begin(), others.end());
    if (others.back() - others.front() > tau) continue;
    const double mean =
        std::accumulate(others.begin(), others.end(), 0.0) / static_cast<double>(n - 1);
    const double gap = std::abs(scores[i] - mean);
    if (gap <= tau) continue;
    if (!best || gap > best_gap) {
      best = i;
      best_gap = gap;
      tied = false;
    } else if (gap == best_gap) {
      tied = true;
    }
  }

  OutlierResult result;
  if (best && !tied) {
    result.index = best;
    return result;
  }
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  result.ambiguous = (*hi - *lo) > tau;
  return result;
}

ClusterVerdict evaluate_cluster(std::span<const UavObservation> members,
                                const DetectorConfig& config, std::size_t interval_index) {
  const std::size_t k = members.size();
  if (k < 3) {
    throw ClusterTooSmallError("cluster evaluation needs at least 3 UAVs, got " + std::to_string(k));
  }

  std::vector<double> energies(k);
  for (std::size_t i = 0; i < k; ++i) energies[i] = members[i].energy;

  ClusterVerdict verdict;
  verdict.interval_index = interval_index;
  std::vector<double> scores(k);
  double deviation_sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& m = members[i];
    const double task = task_trust(opinion_from_evidence(m.evidence));
    const double energy = energy_trust(m.energy, peer_mean_energy(energies, i));
    // No samples yet (right after a reset) counts as no deviation.
    const double deviation = m.window.empty() ? 0.0 : deviation_trust(m.window, config.alpha);
    const TrustComponents tc = fuse(task, energy, deviation, config.weights);
    verdict.trust[m.id] = tc;
    scores[i] = tc.total_trust;
    deviation_sum += deviation;
  }

  const OutlierResult outlier = find_outlier(scores, config.range_threshold);
  verdict.ambiguous = outlier.ambiguous;
  if (outlier.index) {
    verdict.flagged = members[*outlier.index].id;
    verdict.classification = Classification::kAttackFlagged;
  } else if (!outlier.ambiguous &&
             deviation_sum / static_cast<double>(k) > config.environmental_deviation) {
    verdict.classification = Classification::kEnvironmentalShift;
  }
  return verdict;
}

void TrustHistory::record(const ClusterVerdict& verdict) {
  verdicts_.push_back(verdict);
  for (const auto& [id, tc] : verdict.trust) series_[id].push_back(tc);
}

void TrustHistory::clear() noexcept {
  verdicts_.clear();
  series_.clear();
}

IntervalDecision classify_interval(const TrustHistory& history, const ClusterVerdict& verdict,
                                   std::size_t persistence) {
  IntervalDecision decision{verdict.classification, std::nullopt};
  if (!verdict.flagged) return decision;

  std::size_t run = 1;
  const auto& past = history.verdicts();
  for (auto it = past.rbegin(); it != past.rend() && run < persistence; ++it) {
    if (it->flagged != verdict.flagged) break;
    ++run;
  }
  if (run >= persistence) decision.confirmed = verdict.flagged;
  return decision;
}

TrustHistory mission_reset(TrustHistory history) {
  history.clear();
  return history;
}

TrustMonitor::TrustMonitor(std::vector<UavId> members, DetectorConfig config)
    : members_(std::move(members)), config_(std::move(config)) {
  config_.validate();
  if (members_.size() < 3) {
    throw ClusterTooSmallError("a monitored cluster needs at least 3 UAVs, got " +
                               std::to_string(members_.size()));
  }
  for (UavId id : members_) {
    if (!tracks_.emplace(id, Track{}).second) {
      throw ValidationError("unique cluster members", "UAV " + std::to_string(id) + " listed twice");
    }
  }
}

TrustMonitor::Track& TrustMonitor::track(UavId uav) {
  auto it = tracks_.find(uav);
  if (it == tracks_.end()) throw std::out_of_range("UAV " + std::to_string(uav) + " not in cluster");
  return it->second;
}

const TrustMonitor::Track& TrustMonitor::track(UavId uav) const {
  auto it = tracks_.find(uav);
  if (it == tracks_.end()) throw std::out_of_range("UAV " + std::to_string(uav) + " not in cluster");
  return it->second;
}

void TrustMonitor::record_task(UavId uav, Observation observed) {
  auto& ev = track(uav).evidence;
  switch (observed) {
    case Observation::kSuccess: ++ev.successful; break;
    case Observation::kFail: ++ev.failed; break;
    case Observation::kUncertain: ++ev.uncertain; break;
  }
}

void TrustMonitor::record_energy(UavId uav, double joules) {
  if (!(joules >= 0.0)) throw std::invalid_argument("energy increments must be non-negative");
  track(uav).energy += joules;
}

void TrustMonitor::record_position(UavId uav, const PositionSample& sample) {
  auto& window = track(uav).window;
  if (!window.empty() && !(sample.time > window.back().time)) {
    throw std::invalid_argument("position samples must be strictly increasing in time");
  }
  window.push_back(sample);
  while (window.size() > config_.alpha) window.pop_front();
}

TrustMonitor::Evaluation TrustMonitor::evaluate() {
  std::vector<UavObservation> observations;
  observations.reserve(members_.size());
  for (UavId id : members_) {
    const auto& t = tracks_.at(id);
    observations.push_back({id, t.evidence, t.energy, {t.window.begin(), t.window.end()}});
  }
  Evaluation out;
  out.verdict = evaluate_cluster(observations, config_, history_.verdicts().size());
  out.decision = classify_interval(history_, out.verdict, config_.persistence);
  history_.record(out.verdict);
  return out;
}

void TrustMonitor::mission_reset() {
  for (auto& [id, t] : tracks_) t = Track{};
  history_ = uavtrust::mission_reset(std::move(history_));
}

const EvidenceCounts& TrustMonitor::evidence(UavId uav) const { return track(uav).evidence; }

double TrustMonitor::energy(UavId uav) const { return track(uav).energy; }

}  // namespace uavtrust
