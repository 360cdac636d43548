#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "uavtrust/errors.hpp"
#include "uavtrust/trust.hpp"

using namespace uavtrust;

namespace {

std::vector<PositionSample> offset_samples(const std::vector<Vec3>& offsets) {
  std::vector<PositionSample> out;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    PositionSample s;
    s.time = static_cast<double>(i);
    s.expected = Vec3(10.0 * i, -3.0, 100.0);
    s.actual = s.expected + offsets[i];
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("opinion from evidence") {
  const auto none = opinion_from_evidence({0, 0, 0});
  CHECK(none.belief == 0.0);
  CHECK(none.disbelief == 0.0);
  CHECK(none.uncertainty == 1.0);

  const auto all = opinion_from_evidence({5, 0, 0});
  CHECK(all.belief == 1.0);
  CHECK(all.disbelief == 0.0);
  CHECK(all.uncertainty == 0.0);

  const auto mixed = opinion_from_evidence({3, 1, 1});
  CHECK(mixed.belief == doctest::Approx(3.0 / 5.0).epsilon(1e-15));
  CHECK(mixed.disbelief == doctest::Approx(1.0 / 5.0).epsilon(1e-15));
  CHECK(mixed.uncertainty == doctest::Approx(1.0 / 5.0).epsilon(1e-15));
}

TEST_CASE("task trust") {
  CHECK(task_trust({1.0, 0.0, 0.0}) == 1.0);
  CHECK(task_trust({0.0, 0.0, 1.0}) == 0.5);
  CHECK(task_trust({0.6, 0.2, 0.2}) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(task_trust(opinion_from_evidence({3, 1, 1})) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("opinion masses sum to one and task trust stays in range") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint64_t> count(0, 1000);
  for (int i = 0; i < 5000; ++i) {
    const EvidenceCounts ev{count(rng), count(rng), count(rng)};
    const auto op = opinion_from_evidence(ev);
    CHECK(std::abs(op.belief + op.disbelief + op.uncertainty - 1.0) <= 1e-12);
    CHECK(op.belief >= 0.0);
    CHECK(op.disbelief >= 0.0);
    CHECK(op.uncertainty >= 0.0);
    const double t = task_trust(op);
    CHECK(t >= 0.0);
    CHECK(t <= 1.0);
  }
}

TEST_CASE("one more success never lowers task trust") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<std::uint64_t> count(0, 200);
  for (int i = 0; i < 5000; ++i) {
    EvidenceCounts ev{count(rng), count(rng), count(rng)};
    const double before = task_trust(opinion_from_evidence(ev));
    ++ev.successful;
    CHECK(task_trust(opinion_from_evidence(ev)) >= before - 1e-15);
  }
}

TEST_CASE("task trust is monotone in belief at fixed uncertainty") {
  for (double u = 0.0; u <= 1.0; u += 0.125) {
    double last = -1.0;
    for (double b = 0.0; b + u <= 1.0 + 1e-12; b += 0.0625) {
      const double t = task_trust({b, 1.0 - b - u, u});
      CHECK(t >= last);
      last = t;
    }
  }
}

TEST_CASE("peer mean energy") {
  const std::vector<double> e{10.0, 20.0, 30.0};
  CHECK(peer_mean_energy(e, 0) == 25.0);
  const std::vector<double> flat{10.0, 10.0, 10.0};
  CHECK(peer_mean_energy(flat, 1) == 10.0);
  const std::vector<double> zero{0.0, 0.0};
  CHECK(peer_mean_energy(zero, 0) == 0.0);

  const std::vector<double> lone{5.0};
  CHECK_THROWS_AS(peer_mean_energy(lone, 0), ClusterTooSmallError);
  CHECK_THROWS_AS(peer_mean_energy(std::vector<double>{}, 0), ClusterTooSmallError);
  CHECK_THROWS(peer_mean_energy(e, 3));
}

TEST_CASE("energy trust") {
  CHECK(energy_trust(10.0, 10.0) == 0.0);
  CHECK(energy_trust(20.0, 10.0) == 1.0);
  CHECK(energy_trust(5.0, 10.0) == 0.5);
  CHECK(energy_trust(5.0, 0.0) == 10.0);
  CHECK(energy_trust(0.0, 0.0) == 0.0);
  CHECK(energy_trust(1e-10, 1e-10) == 0.0);
  CHECK(energy_trust(3.0, 0.0, {1e-9, 4.0}) == 4.0);
}

TEST_CASE("energy trust is scale invariant") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> e(1.0, 1e6);
  std::uniform_real_distribution<double> lambda(1e-3, 1e3);
  for (int i = 0; i < 2000; ++i) {
    const double a = e(rng);
    const double b = e(rng);
    const double l = lambda(rng);
    CHECK(energy_trust(l * a, l * b) == doctest::Approx(energy_trust(a, b)).epsilon(1e-12));
    CHECK(energy_trust(a, a) == 0.0);
  }
}

TEST_CASE("deviation trust") {
  const auto exact = offset_samples({Vec3::Zero(), Vec3::Zero(), Vec3::Zero()});
  CHECK(deviation_trust(exact, 10) == 0.0);

  const Vec3 off(3.0, 4.0, 0.0);
  const auto constant = offset_samples({off, off, off, off, off, off});
  CHECK(deviation_trust(constant, 4) == doctest::Approx(5.0).epsilon(1e-12));

  const auto two = offset_samples({Vec3(100, 0, 0), Vec3::Zero(), Vec3(0, 0, 10)});
  CHECK(std::abs(deviation_trust(two, 2) - 5.0) <= 1e-9);
  CHECK(std::abs(deviation_trust(two, 3) - 110.0 / 3.0) <= 1e-9);
}

TEST_CASE("deviation trust averages what is available when the window is short") {
  const auto s = offset_samples({Vec3(6, 8, 0), Vec3(0, 0, 2)});
  CHECK(deviation_trust(s, 10) == doctest::Approx(6.0));
  CHECK(deviation_trust(s, 1) == doctest::Approx(2.0));
}

TEST_CASE("deviation trust rejects an empty window") {
  const std::vector<PositionSample> none;
  CHECK_THROWS_AS(deviation_trust(none), EmptyWindowError);
  CHECK_THROWS_AS(deviation_trust(none, 5), EmptyWindowError);
  const auto one = offset_samples({Vec3(1, 0, 0)});
  CHECK_THROWS_AS(deviation_trust(one, 0), EmptyWindowError);
}

TEST_CASE("deviation trust is translation invariant") {
  std::mt19937_64 rng(14);
  std::normal_distribution<double> n(0.0, 50.0);
  for (int i = 0; i < 500; ++i) {
    std::vector<Vec3> offs;
    for (int k = 0; k < 8; ++k) offs.emplace_back(n(rng), n(rng), n(rng));
    auto s = offset_samples(offs);
    const double before = deviation_trust(s, 6);
    const Vec3 shift(n(rng) * 10, n(rng) * 10, n(rng));
    for (auto& p : s) {
      p.expected += shift;
      p.actual += shift;
    }
    CHECK(deviation_trust(s, 6) == doctest::Approx(before).epsilon(1e-9));
  }
}

TEST_CASE("total trust") {
  CHECK(total_trust(0.7, 0.0, 0.0, {1.0, 0.0, 0.0, 100.0}) == 0.7);
  const TrustWeights w;
  CHECK(total_trust(0.7, 0.1, 0.0, w) == doctest::Approx(0.31).epsilon(1e-12));
  CHECK(total_trust(0.5, 0.2, 500.0, w) == doctest::Approx(-1.24).epsilon(1e-12));

  const auto c = fuse(0.5, 0.2, 500.0, w);
  CHECK(c.task_trust == 0.5);
  CHECK(c.energy_trust == 0.2);
  CHECK(c.deviation_trust == 500.0);
  CHECK(c.total_trust == doctest::Approx(-1.24).epsilon(1e-12));
}

TEST_CASE("total trust decreases strictly with deviation") {
  const TrustWeights w;
  double last = total_trust(0.8, 0.1, 0.0, w);
  for (double d = 1.0; d < 1000.0; d *= 1.7) {
    const double t = total_trust(0.8, 0.1, d, w);
    CHECK(t < last);
    last = t;
  }
}

TEST_CASE("weights validation") {
  CHECK_NOTHROW(TrustWeights{}.validate());
  CHECK_NOTHROW((TrustWeights{1.0, 0.0, 0.0, 1.0}.validate()));
  CHECK_THROWS_AS((TrustWeights{0.4, 0.3, 0.2, 100.0}.validate()), ValidationError);
  CHECK_THROWS_AS((TrustWeights{1.2, -0.2, 0.0, 100.0}.validate()), ValidationError);
  CHECK_THROWS_AS((TrustWeights{0.4, 0.3, 0.3, 0.0}.validate()), ValidationError);
  try {
    TrustWeights{0.4, 0.3, 0.2, 100.0}.validate();
  } catch (const ValidationError& e) {
    CHECK(e.invariant() == "weights sum to 1");
  }
}
