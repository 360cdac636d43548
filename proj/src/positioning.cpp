#include "uavtrust/positioning.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace uavtrust {

double range_from_timing(double receive_time, double transmit_time, double clock_bias) {
  const double propagation = receive_time - clock_bias - transmit_time;
  if (propagation < 0.0) {
    throw PositioningError(PositioningError::Kind::kNegativePropagation,
                           "signal received " + std::to_string(-propagation) +
                               " s before it was transmitted");
  }
  return propagation * kSpeedOfLight;
}

namespace {

// Unknowns are (x, y, z, c*beta), all in meters.
using State = Eigen::Vector4d;

double sum_squares(std::span<const DistanceStation> stations, const Eigen::VectorXd& pseudo,
                   const State& x) {
  double total = 0.0;
  for (std::size_t i = 0; i < stations.size(); ++i) {
    const double r = (x.head<3>() - stations[i].position).norm() + x[3] - pseudo[static_cast<Eigen::Index>(i)];
    total += r * r;
  }
  return total;
}

}  // namespace

double pseudorange_residual_rms(std::span<const DistanceStation> stations,
                                std::span<const double> receive_times, const Vec3& position,
                                double clock_bias) {
  if (stations.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < stations.size(); ++i) {
    const double measured = (receive_times[i] - stations[i].transmit_time) * kSpeedOfLight;
    const double r = (position - stations[i].position).norm() + clock_bias * kSpeedOfLight - measured;
    total += r * r;
  }
  return std::sqrt(total / static_cast<double>(stations.size()));
}

PositionFix solve_position(std::span<const DistanceStation> stations,
                           std::span<const double> receive_times, SolverOptions options) {
  const std::size_t n = stations.size();
  if (n < 4) {
    throw PositioningError(PositioningError::Kind::kInsufficientStations,
                           "need at least 4 stations for position and clock bias, got " +
                               std::to_string(n));
  }
  if (receive_times.size() != n) {
    throw std::invalid_argument("one receive time per station required");
  }

  Eigen::VectorXd pseudo(static_cast<Eigen::Index>(n));
  Vec3 centroid = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    pseudo[static_cast<Eigen::Index>(i)] = (receive_times[i] - stations[i].transmit_time) * kSpeedOfLight;
    centroid += stations[i].position;
  }
  centroid /= static_cast<double>(n);
  for (const auto& s : stations) {
    // The line-of-sight direction is undefined on top of a station.
    if ((s.position - centroid).norm() < 1e-9) centroid.z() += 1.0;
  }

  State x;
  x << centroid, 0.0;
  double cost = sum_squares(stations, pseudo, x);

  Eigen::MatrixXd jacobian(static_cast<Eigen::Index>(n), 4);
  Eigen::VectorXd residual(static_cast<Eigen::Index>(n));
  for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      const Vec3 diff = x.head<3>() - stations[i].position;
      const double dist = diff.norm();
      jacobian.row(row).head<3>() = dist > 0.0 ? Vec3(diff / dist) : Vec3::Zero();
      jacobian(row, 3) = 1.0;
      residual[row] = dist + x[3] - pseudo[row];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jacobian);
    qr.setThreshold(1e-9);
    if (qr.rank() < 4) {
      throw PositioningError(PositioningError::Kind::kDegenerateGeometry,
                             "station geometry is rank deficient (rank " +
                                 std::to_string(qr.rank()) + " of 4)");
    }
    const State delta = qr.solve(-residual);

    // Halve the step until the cost does not grow; no acceptable step means
    // we are already at a stationary point.
    double scale = 1.0;
    bool accepted = false;
    for (int k = 0; k < 40; ++k, scale *= 0.5) {
      const State candidate = x + scale * delta;
      const double c = sum_squares(stations, pseudo, candidate);
      if (c <= cost) {
        x = candidate;
        cost = c;
        accepted = true;
        break;
      }
    }
    const double update = accepted ? scale * delta.head<3>().norm() : 0.0;
    if (update < options.tolerance) {
      PositionFix fix;
      fix.position = x.head<3>();
      fix.clock_bias = x[3] / kSpeedOfLight;
      fix.residual_rms = std::sqrt(cost / static_cast<double>(n));
      fix.iterations = iter;
      return fix;
    }
  }
  throw PositioningError(PositioningError::Kind::kNonConvergence,
                         "no convergence after " + std::to_string(options.max_iterations) +
                             " iterations");
}

std::vector<double> synthesize_receive_times(std::span<const DistanceStation> stations,
                                             const Vec3& position, double clock_bias,
                                             double range_noise_std, Rng* rng) {
  std::vector<double> times;
  times.reserve(stations.size());
  for (const auto& s : stations) {
    double range = (position - s.position).norm();
    if (rng != nullptr && range_noise_std > 0.0) range += range_noise_std * standard_normal(*rng);
    times.push_back(s.transmit_time + clock_bias + range / kSpeedOfLight);
  }
  return times;
}

}  // namespace uavtrust
