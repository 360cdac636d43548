#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "uavtrust/trust.hpp"

namespace uavtrust {

struct DetectorConfig {
  double evaluation_interval = 240.0;  // s
  double range_threshold = 0.15;       // tau, in T_total units
  std::size_t alpha = 10;              // deviation window, samples
  TrustWeights weights{};
  // Consecutive intervals the same UAV must be flagged before it is
  // reported as a confirmed attack.
  std::size_t persistence = 1;
  // Cluster-mean T_dev (m) above which an unflagged interval is reported as
  // an environmental shift rather than clear.
  double environmental_deviation = 4.0;

  void validate() const;
};

enum class Classification { kClear, kAttackFlagged, kEnvironmentalShift };

std::string_view to_string(Classification c) noexcept;

/// Result of comparing one interval's total scores against each other.
struct OutlierResult {
  std::optional<std::size_t> index;
  // Scores are spread wider than tau but no single member explains it.
  bool ambiguous = false;
};

/// Flags member i iff |s_i - mean(s_-i)| > tau and every other pair is
/// within tau. If several members qualify, the one furthest from its peers is
/// flagged; an exact tie flags nobody and is reported as ambiguous. The
/// result does not depend on the order of `scores`.
OutlierResult find_outlier(std::span<const double> scores, double tau);

/// Snapshot of what the audit unit knows about one UAV at evaluation time.
struct UavObservation {
  UavId id = 0;
  EvidenceCounts evidence{};
  double energy = 0.0;                  // cumulative this mission, J
  std::vector<PositionSample> window;   // most recent samples, oldest first
};

struct ClusterVerdict {
  std::size_t interval_index = 0;
  std::map<UavId, TrustComponents> trust;
  std::optional<UavId> flagged;
  Classification classification = Classification::kClear;
  bool ambiguous = false;

  bool operator==(const ClusterVerdict&) const = default;
};

/// One pass of the detection loop: trust components for every member, then
/// the peer-range comparison. Requires at least three members.
ClusterVerdict evaluate_cluster(std::span<const UavObservation> members,
                                const DetectorConfig& config,
                                std::size_t interval_index = 0);

/// Verdicts and per-UAV component series for the current mission.
class TrustHistory {
 public:
  void record(const ClusterVerdict& verdict);
  void clear() noexcept;
  bool empty() const noexcept { return verdicts_.empty(); }

  const std::vector<ClusterVerdict>& verdicts() const noexcept { return verdicts_; }
  const std::map<UavId, std::vector<TrustComponents>>& series() const noexcept { return series_; }

  bool operator==(const TrustHistory&) const = default;

 private:
  std::vector<ClusterVerdict> verdicts_;
  std::map<UavId, std::vector<TrustComponents>> series_;
};

struct IntervalDecision {
  Classification classification = Classification::kClear;
  std::optional<UavId> confirmed;

  bool operator==(const IntervalDecision&) const = default;
};

/// Confirms the verdict's flag once the same UAV has been flagged in
/// `persistence` consecutive intervals, counting `verdict` itself. `history`
/// holds the earlier intervals only.
IntervalDecision classify_interval(const TrustHistory& history, const ClusterVerdict& verdict,
                                   std::size_t persistence);

/// Clears everything accumulated during a mission.
TrustHistory mission_reset(TrustHistory history);

/// Audit-unit state for one cluster: evidence, energy and position windows
/// for every member plus the verdict history.
class TrustMonitor {
 public:
  struct Evaluation {
    ClusterVerdict verdict;
    IntervalDecision decision;

    bool operator==(const Evaluation&) const = default;
  };

  TrustMonitor(std::vector<UavId> members, DetectorConfig config);

  enum class Observation { kSuccess, kFail, kUncertain };

  void record_task(UavId uav, Observation observed);
  void record_energy(UavId uav, double joules);
  void record_position(UavId uav, const PositionSample& sample);

  Evaluation evaluate();
  void mission_reset();

  const std::vector<UavId>& members() const noexcept { return members_; }
  const DetectorConfig& config() const noexcept { return config_; }
  const TrustHistory& history() const noexcept { return history_; }
  const EvidenceCounts& evidence(UavId uav) const;
  double energy(UavId uav) const;

 private:
  struct Track {
    EvidenceCounts evidence;
    double energy = 0.0;
    std::deque<PositionSample> window;
  };

  Track& track(UavId uav);
  const Track& track(UavId uav) const;

  std::vector<UavId> members_;
  DetectorConfig config_;
  std::map<UavId, Track> tracks_;
  TrustHistory history_;
};

}  // namespace uavtrust
