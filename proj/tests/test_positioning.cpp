#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "uavtrust/positioning.hpp"
#include "uavtrust/random.hpp"

using namespace uavtrust;

namespace {

std::vector<DistanceStation> ring(std::size_t n, Rng& rng) {
  std::vector<DistanceStation> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = 2.0 * M_PI * (static_cast<double>(i) + 0.3 * uniform01(rng)) / static_cast<double>(n);
    DistanceStation s;
    s.id = static_cast<std::uint32_t>(i);
    s.position = Vec3(1000.0 + 900.0 * std::cos(angle), 1000.0 + 900.0 * std::sin(angle),
                      i % 2 == 0 ? 0.0 : 300.0 + 200.0 * uniform01(rng));
    s.transmit_time = 1e-3 * uniform01(rng);
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("range from timing") {
  CHECK(range_from_timing(2.0, 2.0, 0.0) == 0.0);
  CHECK(range_from_timing(1e-6, 0.0, 0.0) == doctest::Approx(299.792458).epsilon(1e-12));
  CHECK(range_from_timing(5e-6, 1e-6, 3e-6) == doctest::Approx(299.792458).epsilon(1e-9));
  try {
    range_from_timing(1.0, 1.0, 1e-9);
    FAIL("expected an error");
  } catch (const PositioningError& e) {
    CHECK(e.kind() == PositioningError::Kind::kNegativePropagation);
  }
}

TEST_CASE("four stations recover position and bias") {
  const std::vector<DistanceStation> ds{{0, Vec3(0, 0, 0), 0.0},
                                        {1, Vec3(2000, 0, 0), 0.0},
                                        {2, Vec3(0, 2000, 0), 0.0},
                                        {3, Vec3(1000, 1000, 800), 0.0}};
  const Vec3 truth(700, 900, 120);

  auto times = synthesize_receive_times(ds, truth, 0.0);
  auto fix = solve_position(ds, times);
  CHECK((fix.position - truth).norm() <= 1e-6);
  CHECK(std::abs(fix.clock_bias) <= 1e-9);
  CHECK(fix.residual_rms < 1e-6);

  times = synthesize_receive_times(ds, truth, 1e-5);
  fix = solve_position(ds, times);
  CHECK((fix.position - truth).norm() <= 1e-6);
  CHECK(std::abs(fix.clock_bias - 1e-5) <= 1e-9);
  CHECK(fix.iterations >= 1);
}

TEST_CASE("three stations are not enough") {
  const std::vector<DistanceStation> ds{{0, Vec3(0, 0, 0), 0.0}, {1, Vec3(1, 0, 0), 0.0}, {2, Vec3(0, 1, 0), 0.0}};
  const std::vector<double> t{1e-6, 1e-6, 1e-6};
  try {
    solve_position(ds, t);
    FAIL("expected an error");
  } catch (const PositioningError& e) {
    CHECK(e.kind() == PositioningError::Kind::kInsufficientStations);
  }
}

TEST_CASE("collinear stations are degenerate") {
  std::vector<DistanceStation> ds;
  for (std::uint32_t i = 0; i < 5; ++i) ds.push_back({i, Vec3(100.0 * i, 0, 0), 0.0});
  const auto t = synthesize_receive_times(ds, Vec3(150, 80, 40), 0.0);
  CHECK_THROWS_AS(solve_position(ds, t), PositioningError);
}

TEST_CASE("round trip over random geometries") {
  Rng rng = make_stream(31, {0});
  for (int trial = 0; trial < 300; ++trial) {
    const auto ds = ring(4 + static_cast<std::size_t>(trial % 3), rng);
    const Vec3 truth(500.0 + 1000.0 * uniform01(rng), 500.0 + 1000.0 * uniform01(rng), 50.0 + 200.0 * uniform01(rng));
    const double bias = 1e-4 * (uniform01(rng) - 0.5);
    const auto fix = solve_position(ds, synthesize_receive_times(ds, truth, bias));
    CHECK((fix.position - truth).norm() <= 1e-6);
    CHECK(std::abs(fix.clock_bias - bias) <= 1e-9);
  }
}

TEST_CASE("a common time shift only moves the bias") {
  Rng rng = make_stream(32, {0});
  for (int trial = 0; trial < 100; ++trial) {
    const auto ds = ring(6, rng);
    const Vec3 truth(800, 1200, 150);
    auto times = synthesize_receive_times(ds, truth, 0.0, 3.0, &rng);
    const auto base = solve_position(ds, times);
    const double shift = 2e-6 * uniform01(rng);
    for (auto& t : times) t += shift;
    const auto moved = solve_position(ds, times);
    CHECK((moved.position - base.position).norm() <= 1e-5);
    CHECK(moved.clock_bias - base.clock_bias == doctest::Approx(shift).epsilon(1e-6));
  }
}

TEST_CASE("residual never exceeds the one at the initial guess") {
  Rng rng = make_stream(33, {0});
  for (int trial = 0; trial < 200; ++trial) {
    const auto ds = ring(4 + static_cast<std::size_t>(trial % 3), rng);
    const Vec3 truth(2000.0 * uniform01(rng), 2000.0 * uniform01(rng), 400.0 * uniform01(rng));
    const auto times = synthesize_receive_times(ds, truth, 0.0, 20.0, &rng);
    Vec3 centroid = Vec3::Zero();
    for (const auto& s : ds) centroid += s.position;
    centroid /= static_cast<double>(ds.size());
    const double initial = pseudorange_residual_rms(ds, times, centroid, 0.0);
    const auto fix = solve_position(ds, times);
    CHECK(fix.residual_rms <= initial + 1e-9);
    CHECK(fix.residual_rms == doctest::Approx(pseudorange_residual_rms(ds, times, fix.position, fix.clock_bias)));
  }
}

TEST_CASE("noisy ranges give metre-level fixes") {
  Rng rng = make_stream(34, {0});
  double sq = 0.0;
  const int trials = 300;
  for (int trial = 0; trial < trials; ++trial) {
    const auto ds = ring(6, rng);
    const Vec3 truth(600.0 + 800.0 * uniform01(rng), 600.0 + 800.0 * uniform01(rng), 100.0);
    const auto fix = solve_position(ds, synthesize_receive_times(ds, truth, 0.0, 5.0, &rng));
    sq += (fix.position - truth).squaredNorm();
  }
  CHECK(std::sqrt(sq / trials) <= 15.0);
}
