#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "uavtrust/detector.hpp"
#include "uavtrust/errors.hpp"

using namespace uavtrust;

namespace {

// Direct restatement of the flagging rule for three scores.
std::optional<std::size_t> triple_oracle(const std::array<double, 3>& s, double tau) {
  std::vector<std::pair<double, std::size_t>> hits;
  for (std::size_t i = 0; i < 3; ++i) {
    const double a = s[(i + 1) % 3];
    const double b = s[(i + 2) % 3];
    if (std::abs(a - b) > tau) continue;
    const double gap = std::abs(s[i] - (std::min(a, b) + std::max(a, b)) / 2.0);
    if (gap > tau) hits.emplace_back(gap, i);
  }
  if (hits.empty()) return std::nullopt;
  std::sort(hits.rbegin(), hits.rend());
  if (hits.size() > 1 && hits[0].first == hits[1].first) return std::nullopt;
  return hits[0].second;
}

// Multiples of 1/1024.
double dyadic(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng) / 1024.0;
}

std::vector<UavObservation> calm_cluster(std::size_t k) {
  std::vector<UavObservation> out;
  for (std::size_t i = 0; i < k; ++i) {
    UavObservation o;
    o.id = static_cast<UavId>(i);
    o.evidence = {8, 1, 1};
    o.energy = 1000.0;
    for (int t = 0; t < 5; ++t) {
      PositionSample s;
      s.time = t;
      s.expected = Vec3(t, 0, 100);
      s.actual = s.expected + Vec3(1, 0, 0);
      o.window.push_back(s);
    }
    out.push_back(o);
  }
  return out;
}

}  // namespace

TEST_CASE("outlier examples") {
  const double tau = 0.15;
  const std::vector<double> tight{0.31, 0.30, 0.32};
  auto r = find_outlier(tight, tau);
  CHECK_FALSE(r.index);
  CHECK_FALSE(r.ambiguous);

  const std::vector<double> spoofed{-1.24, 0.31, 0.30};
  r = find_outlier(spoofed, tau);
  REQUIRE(r.index);
  CHECK(*r.index == 0);

  const std::vector<double> pairs{0.10, 0.12, 0.95, 0.93};
  r = find_outlier(pairs, tau);
  CHECK_FALSE(r.index);
  CHECK(r.ambiguous);

  const std::vector<double> two{0.0, 1.0};
  CHECK_THROWS_AS(find_outlier(two, tau), ClusterTooSmallError);
}

TEST_CASE("equal gaps flag nobody") {
  const std::vector<double> s{0.0, 0.2, -0.2};
  const auto r = find_outlier(s, 0.15);
  CHECK_FALSE(r.index);
  CHECK(r.ambiguous);
}

TEST_CASE("identical scores are never flagged") {
  for (std::size_t k = 3; k < 8; ++k) {
    const std::vector<double> s(k, -0.37);
    const auto r = find_outlier(s, 0.15);
    CHECK_FALSE(r.index);
    CHECK_FALSE(r.ambiguous);
  }
}

TEST_CASE("outlier rule matches a direct restatement on random triples") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 3000; ++i) {
    const std::array<double, 3> s{dyadic(rng, -600, 600), dyadic(rng, -600, 600),
                                  dyadic(rng, -600, 600)};
    const auto r = find_outlier(s, 0.15);
    CHECK(r.index == triple_oracle(s, 0.15));
  }
}

TEST_CASE("verdicts are translation and relabeling invariant") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> s{dyadic(rng, -400, 400), dyadic(rng, -400, 400), dyadic(rng, -400, 400)};
    const auto base = find_outlier(s, 0.15);

    std::vector<double> shifted = s;
    const double c = dyadic(rng, -4096, 4096);
    for (auto& v : shifted) v += c;
    const auto moved = find_outlier(shifted, 0.15);
    CHECK(moved.index == base.index);
    CHECK(moved.ambiguous == base.ambiguous);

    std::vector<std::size_t> perm{0, 1, 2};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> relabeled(3);
    for (std::size_t j = 0; j < 3; ++j) relabeled[j] = s[perm[j]];
    const auto p = find_outlier(relabeled, 0.15);
    CHECK(p.ambiguous == base.ambiguous);
    REQUIRE(p.index.has_value() == base.index.has_value());
    if (p.index) CHECK(perm[*p.index] == *base.index);
  }
}

TEST_CASE("at most one flag in larger clusters under relabeling") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> n(0.3, 0.1);
  for (int i = 0; i < 1000; ++i) {
    std::vector<UavObservation> cluster = calm_cluster(5);
    for (auto& o : cluster) {
      o.energy = 1000.0 * (1.0 + std::abs(n(rng)));
      for (auto& s : o.window) s.actual = s.expected + Vec3(100.0 * n(rng), 0, 0);
    }
    const auto v = evaluate_cluster(cluster, {});
    std::size_t flagged = 0;
    for (const auto& [id, tc] : v.trust) flagged += (v.flagged == id) ? 1 : 0;
    CHECK(flagged <= 1);

    std::vector<UavObservation> reversed(cluster.rbegin(), cluster.rend());
    const auto w = evaluate_cluster(reversed, {});
    CHECK(w.flagged == v.flagged);
    CHECK(w.classification == v.classification);
  }
}

TEST_CASE("evaluate cluster computes every member's components") {
  auto cluster = calm_cluster(3);
  cluster[0].energy = 2000.0;
  const auto v = evaluate_cluster(cluster, {}, 4);
  CHECK(v.interval_index == 4);
  REQUIRE(v.trust.size() == 3);
  const auto& a = v.trust.at(0);
  CHECK(a.task_trust == doctest::Approx(0.85));
  CHECK(a.energy_trust == doctest::Approx(1.0));
  CHECK(a.deviation_trust == doctest::Approx(1.0));
  CHECK(a.total_trust == doctest::Approx(0.4 * 0.85 + 0.3 * 1.0 - 0.3 * 0.01));
  const auto& b = v.trust.at(1);
  CHECK(b.energy_trust == doctest::Approx(0.5 / 1.5));
  CHECK(v.flagged == std::optional<UavId>(0));
  CHECK(v.classification == Classification::kAttackFlagged);
}

TEST_CASE("a cluster-wide deviation is an environmental shift") {
  auto cluster = calm_cluster(3);
  for (auto& o : cluster) {
    for (auto& s : o.window) s.actual = s.expected + Vec3(30, 0, 0);
  }
  const auto v = evaluate_cluster(cluster, {});
  CHECK_FALSE(v.flagged);
  CHECK(v.classification == Classification::kEnvironmentalShift);

  DetectorConfig strict;
  strict.environmental_deviation = 50.0;
  CHECK(evaluate_cluster(cluster, strict).classification == Classification::kClear);
}

TEST_CASE("evaluate cluster needs three members") {
  const auto pair = calm_cluster(2);
  CHECK_THROWS_AS(evaluate_cluster(pair, {}), ClusterTooSmallError);
}

TEST_CASE("persistence") {
  ClusterVerdict flag_a;
  flag_a.flagged = 1;
  flag_a.classification = Classification::kAttackFlagged;
  ClusterVerdict flag_b = flag_a;
  flag_b.flagged = 2;

  TrustHistory h;
  CHECK(classify_interval(h, flag_a, 1).confirmed == std::optional<UavId>(1));
  CHECK_FALSE(classify_interval(h, flag_a, 2).confirmed);

  h.record(flag_a);
  CHECK(classify_interval(h, flag_a, 2).confirmed == std::optional<UavId>(1));
  CHECK_FALSE(classify_interval(h, flag_b, 2).confirmed);

  TrustHistory alternating;
  alternating.record(flag_a);
  alternating.record(flag_b);
  alternating.record(flag_a);
  CHECK_FALSE(classify_interval(alternating, flag_b, 2).confirmed);
  CHECK(classify_interval(alternating, flag_b, 2).classification == Classification::kAttackFlagged);

  const ClusterVerdict clear;
  CHECK_FALSE(classify_interval(h, clear, 1).confirmed);
}

TEST_CASE("mission reset is idempotent") {
  TrustHistory h;
  ClusterVerdict v;
  v.trust[0] = {};
  h.record(v);
  CHECK_FALSE(h.empty());
  const auto once = mission_reset(h);
  CHECK(once.empty());
  CHECK(once.series().empty());
  CHECK(mission_reset(once) == once);
}

TEST_CASE("monitor after reset reports neutral scores") {
  TrustMonitor m({4, 5, 6}, {});
  m.record_task(4, TrustMonitor::Observation::kFail);
  m.record_energy(5, 300.0);
  m.record_position(6, {1.0, Vec3(0, 0, 0), Vec3(40, 0, 0)});
  m.evaluate();
  m.mission_reset();
  CHECK(m.history().empty());

  const auto e = m.evaluate();
  for (const UavId id : {4u, 5u, 6u}) {
    const auto& tc = e.verdict.trust.at(id);
    CHECK(tc.task_trust == 0.5);
    CHECK(tc.energy_trust == 0.0);
    CHECK(tc.deviation_trust == 0.0);
  }
  CHECK_FALSE(e.verdict.flagged);
}

TEST_CASE("monitor keeps only the newest alpha samples") {
  DetectorConfig cfg;
  cfg.alpha = 2;
  TrustMonitor m({0, 1, 2}, cfg);
  for (UavId id = 0; id < 3; ++id) {
    m.record_position(id, {1.0, Vec3::Zero(), Vec3(100, 0, 0)});
    m.record_position(id, {2.0, Vec3::Zero(), Vec3(3, 4, 0)});
    m.record_position(id, {3.0, Vec3::Zero(), Vec3(0, 0, 5)});
  }
  const auto e = m.evaluate();
  CHECK(e.verdict.trust.at(1).deviation_trust == doctest::Approx(5.0));
}

TEST_CASE("monitor input checks") {
  CHECK_THROWS_AS(TrustMonitor({0, 1}, {}), ClusterTooSmallError);
  CHECK_THROWS_AS(TrustMonitor({0, 1, 1}, {}), ValidationError);
  DetectorConfig bad;
  bad.range_threshold = 0.0;
  CHECK_THROWS_AS(TrustMonitor({0, 1, 2}, bad), ValidationError);

  TrustMonitor m({0, 1, 2}, {});
  CHECK_THROWS(m.record_energy(0, -1.0));
  CHECK_THROWS(m.record_task(9, TrustMonitor::Observation::kSuccess));
  m.record_position(0, {2.0, Vec3::Zero(), Vec3::Zero()});
  CHECK_THROWS(m.record_position(0, {2.0, Vec3::Zero(), Vec3::Zero()}));
  m.record_task(1, TrustMonitor::Observation::kUncertain);
  CHECK(m.evidence(1) == EvidenceCounts{0, 0, 1});
}
