#pragma once

// Ranging against distance stations (DS) and joint position/clock-bias
// solving from four or more pseudoranges.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavtrust/geometry.hpp"
#include "uavtrust/random.hpp"

namespace uavtrust {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

struct DistanceStation {
  std::uint32_t id = 0;
  Vec3 position = Vec3::Zero();
  double transmit_time = 0.0;  // s
};

struct PositionFix {
  Vec3 position = Vec3::Zero();
  double clock_bias = 0.0;  // s
  double residual_rms = 0.0;  // m
  std::size_t iterations = 0;
};

class PositioningError : public std::runtime_error {
 public:
  enum class Kind { kNegativePropagation, kInsufficientStations, kNonConvergence, kDegenerateGeometry };

  PositioningError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// (t_i - beta - s_i) * c. Throws kNegativePropagation when the signal would
/// arrive before it was sent.
double range_from_timing(double receive_time, double transmit_time, double clock_bias);

struct SolverOptions {
  double tolerance = 1e-6;        // m, on the position update
  std::size_t max_iterations = 50;
};

/// Gauss-Newton on (x, y, z, c*beta) starting from the station centroid with
/// zero bias. Each step is halved until the residual stops growing, so the
/// returned residual never exceeds the one at the initial guess.
PositionFix solve_position(std::span<const DistanceStation> stations,
                           std::span<const double> receive_times, SolverOptions options = {});

/// RMS of |p - p_i| + c*beta - c*(t_i - s_i) over all stations.
double pseudorange_residual_rms(std::span<const DistanceStation> stations,
                                std::span<const double> receive_times, const Vec3& position,
                                double clock_bias);

/// Receive times a receiver at `position` with clock bias `clock_bias`
/// would record. `range_noise_std` (m) adds Gaussian ranging noise drawn
/// from `rng`; pass nullptr for noiseless timings.
std::vector<double> synthesize_receive_times(std::span<const DistanceStation> stations,
                                             const Vec3& position, double clock_bias,
                                             double range_noise_std = 0.0, Rng* rng = nullptr);

}  // namespace uavtrust
