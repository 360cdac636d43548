#pragma once

// Trust scoring primitives evaluated by the audit unit for every UAV in a
// cluster. All functions are pure.

#include <cstddef>
#include <cstdint>
#include <span>

#include "uavtrust/geometry.hpp"

namespace uavtrust {

/// Audit-unit observations of task outcomes within the current mission.
struct EvidenceCounts {
  std::uint64_t successful = 0;
  std::uint64_t failed = 0;
  std::uint64_t uncertain = 0;

  std::uint64_t total() const noexcept { return successful + failed + uncertain; }
  bool operator==(const EvidenceCounts&) const = default;
};

/// Subjective-logic opinion; the three masses sum to one.
struct OpinionVector {
  double belief = 0.0;
  double disbelief = 0.0;
  double uncertainty = 1.0;
};

struct PositionSample {
  double time = 0.0;  // s
  Vec3 expected = Vec3::Zero();
  Vec3 actual = Vec3::Zero();
};

/// Fusion weights. `deviation_scale` (meters) turns the deviation term into a
/// unitless quantity before weighting.
struct TrustWeights {
  double task = 0.4;
  double energy = 0.3;
  double deviation = 0.3;
  double deviation_scale = 100.0;

  /// Throws ValidationError when the weights are outside [0, 1], do not sum
  /// to one within 1e-9, or the deviation scale is not positive.
  void validate() const;
};

struct TrustComponents {
  double task_trust = 0.5;
  double energy_trust = 0.0;
  double deviation_trust = 0.0;  // meters
  double total_trust = 0.0;

  bool operator==(const TrustComponents&) const = default;
};

/// Behaviour of energy_trust when the peer mean is (numerically) zero.
struct EnergyTrustLimits {
  double epsilon = 1e-9;  // J
  double cap = 10.0;
};

/// b = s/n, d = f/n, u = x/n. With no evidence at all the opinion is full
/// uncertainty (0, 0, 1).
OpinionVector opinion_from_evidence(const EvidenceCounts& evidence) noexcept;

/// Expected trustworthiness of a binary statement: (2b + u) / 2.
double task_trust(const OpinionVector& opinion) noexcept;

/// Mean consumed energy of every cluster member except `index`.
/// Throws ClusterTooSmallError for fewer than two members.
double peer_mean_energy(std::span<const double> energies, std::size_t index);

/// |own - peer_mean| / peer_mean, bounded when the peer mean vanishes.
double energy_trust(double own, double peer_mean, EnergyTrustLimits limits = {}) noexcept;

/// Mean expected-to-actual distance over `window`. Throws EmptyWindowError.
double deviation_trust(std::span<const PositionSample> window);

/// Same, restricted to the `alpha` most recent samples (all of them when
/// fewer are available).
double deviation_trust(std::span<const PositionSample> samples, std::size_t alpha);

/// w_task*T_task + w_ene*T_ene - w_dev*(T_dev / deviation_scale).
double total_trust(double task, double energy, double deviation_m,
                   const TrustWeights& weights) noexcept;

/// Bundles the three components with their fused total.
TrustComponents fuse(double task, double energy, double deviation_m,
                     const TrustWeights& weights) noexcept;

}  // namespace uavtrust
