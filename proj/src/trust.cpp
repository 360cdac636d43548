#include "uavtrust/trust.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uavtrust/errors.hpp"

namespace uavtrust {

void TrustWeights::validate() const {
  for (double w : {task, energy, deviation}) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw ValidationError("weights in [0, 1]", "got " + std::to_string(w));
    }
  }
  const double sum = task + energy + deviation;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError("weights sum to 1", "w_task + w_ene + w_dev = " + std::to_string(sum));
  }
  if (!(deviation_scale > 0.0)) {
    throw ValidationError("deviation_scale > 0", "got " + std::to_string(deviation_scale));
  }
}

OpinionVector opinion_from_evidence(const EvidenceCounts& evidence) noexcept {
  const std::uint64_t n = evidence.total();
  if (n == 0) return {0.0, 0.0, 1.0};
  const auto total = static_cast<double>(n);
  return {static_cast<double>(evidence.successful) / total,
          static_cast<double>(evidence.failed) / total,
          static_cast<double>(evidence.uncertain) / total};
}

double task_trust(const OpinionVector& opinion) noexcept {
  return (2.0 * opinion.belief + opinion.uncertainty) / 2.0;
}

double peer_mean_energy(std::span<const double> energies, std::size_t index) {
  if (energies.size() < 2) {
    throw ClusterTooSmallError("peer mean energy needs at least 2 UAVs, got " +
                               std::to_string(energies.size()));
  }
  if (index >= energies.size()) {
    throw std::out_of_range("UAV index " + std::to_string(index) + " not in energy ledger");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < energies.size(); ++j) {
    if (j != index) sum += energies[j];
  }
  return sum / static_cast<double>(energies.size() - 1);
}

double energy_trust(double own, double peer_mean, EnergyTrustLimits limits) noexcept {
  if (peer_mean < limits.epsilon) {
    return own < limits.epsilon ? 0.0 : limits.cap;
  }
  return std::abs(own - peer_mean) / peer_mean;
}

double deviation_trust(std::span<const PositionSample> window) {
  if (window.empty()) throw EmptyWindowError("deviation window has no samples");
  double sum = 0.0;
  for (const auto& s : window) sum += (s.expected - s.actual).norm();
  return sum / static_cast<double>(window.size());
}

double deviation_trust(std::span<const PositionSample> samples, std::size_t alpha) {
  if (alpha == 0) throw EmptyWindowError("deviation window length alpha is 0");
  const std::size_t n = std::min(alpha, samples.size());
  return deviation_trust(samples.last(n));
}

double total_trust(double task, double energy, double deviation_m,
                   const TrustWeights& weights) noexcept {
  return weights.task * task + weights.energy * energy -
         weights.deviation * (deviation_m / weights.deviation_scale);
}

TrustComponents fuse(double task, double energy, double deviation_m,
                     const TrustWeights& weights) noexcept {
  return {task, energy, deviation_m, total_trust(task, energy, deviation_m, weights)};
}

}  // namespace uavtrust
