#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "resfluor/correlation.hpp"
#include "resfluor/oracle.hpp"

using namespace resfluor;
using cplx = std::complex<double>;

namespace {

PhaseSums random_phases(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  std::vector<std::array<double, 2>> phases(n);
  for (auto& p : phases) p = {u(rng), u(rng)};
  return phase_sums_from(std::move(phases));
}

AtomicSteadyState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> g2(0.5, 3.0), det(-3.0, 3.0), om(0.05, 5.0);
  return steady_state({1.0, g2(rng), om(rng), det(rng)});
}

double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("first and second moments in the phase-free configuration") {
  const auto s = state_for_ratio(3.5);
  for (int n = 1; n <= 6; ++n) {
    const auto ps = zero_phases(n);
    CHECK(rel_err(moment(ps, s, {0, 0, 1, 0}), double(n) * s.sigma21) < 1e-14);
    const double expected = n * s.incoherent() + n * n * s.coherence_sq();
    CHECK(rel_err(moment(ps, s, {1, 0, 0, 1}), expected) < 1e-13);
    const auto joint = oracle::build_joint_state(s, n);
    CHECK(rel_err(oracle::oracle_moment(joint, ps, {1, 0, 0, 1}), expected) < 1e-12);
  }
}

TEST_CASE("moments beyond N amplitude factors vanish exactly") {
  std::mt19937_64 rng(2);
  for (int n = 1; n <= 6; ++n) {
    const auto ps = random_phases(n, rng);
    const auto s = random_state(rng);
    for (int extra = 0; extra <= n + 1; ++extra) {
      const MomentSpec lowering{0, 0, n + 1 - extra % 2, extra % 2};
      CHECK(order_overflow(lowering, n));
      CHECK(moment(ps, s, lowering) == cplx(0.0, 0.0));
      CHECK(moment(ps, s, lowering.adjoint()) == cplx(0.0, 0.0));
    }
    CHECK(moment(ps, s, {0, 0, 0, n + 1}) == cplx(0.0, 0.0));
    CHECK(moment(ps, s, {n, 1, 0, 0}) == cplx(0.0, 0.0));
    CHECK_FALSE(order_overflow({n, 0, 0, n}, n));
  }
}

TEST_CASE("engine agrees with the brute-force oracle for all orders up to four") {
  std::mt19937_64 rng(42);
  for (int n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 6; ++trial) {
      const auto ps = random_phases(n, rng);
      const auto s = random_state(rng);
      const auto joint = oracle::build_joint_state(s, n);
      for (int p = 0; p <= 4; ++p)
        for (int q = 0; p + q <= 4; ++q)
          for (int r = 0; p + q + r <= 4; ++r)
            for (int t = 0; p + q + r + t <= 4; ++t) {
              const MomentSpec spec{p, q, r, t};
              if (spec.order() == 0) continue;
              const cplx engine = moment(ps, s, spec);
              CHECK(rel_err(engine, oracle::oracle_moment(joint, ps, spec)) < 1e-10);
              CHECK(rel_err(engine, std::conj(moment(ps, s, spec.adjoint()))) < 1e-13);
            }
    }
}

TEST_CASE("covariance table") {
  std::mt19937_64 rng(4);
  SUBCASE("matches engine moments for random phases") {
    for (int n = 1; n <= 8; ++n) {
      const auto ps = random_phases(n, rng);
      const auto s = random_state(rng);
      const auto t = covariance_table(ps, s);
      CHECK(rel_err(t.mean[0], moment(ps, s, {0, 0, 1, 0})) < 1e-13);
      CHECK(rel_err(t.mean[1], moment(ps, s, {0, 0, 0, 1})) < 1e-13);
      CHECK(rel_err(t.second[0][0], moment(ps, s, {1, 0, 1, 0})) < 1e-12);
      CHECK(rel_err(t.second[0][1], moment(ps, s, {1, 0, 0, 1})) < 1e-12);
      CHECK(rel_err(t.second[1][0], moment(ps, s, {0, 1, 1, 0})) < 1e-12);
      CHECK(rel_err(t.anomalous[0], moment(ps, s, {0, 0, 2, 0})) < 1e-12);
      CHECK(rel_err(t.anomalous[1], moment(ps, s, {0, 0, 0, 2})) < 1e-12);
      for (int j = 0; j < 2; ++j) {
        CHECK(t.centered[j][j].real() == doctest::Approx(n * s.incoherent()).epsilon(1e-12));
        CHECK(t.centered[j][j].real() >= 0.0);
      }
    }
  }
  SUBCASE("phase-free anomalous fluctuation is -N sigma21^2") {
    const auto s = state_for_ratio(3.5);
    for (int n = 1; n <= 5; ++n) {
      const auto t = covariance_table(zero_phases(n), s);
      CHECK(rel_err(t.centered_anomalous[0], -double(n) * s.sigma21 * s.sigma21) < 1e-14);
      const auto joint = oracle::build_joint_state(s, n);
      const cplx mean = oracle::oracle_moment(joint, zero_phases(n), {0, 0, 1, 0});
      const cplx sq = oracle::oracle_moment(joint, zero_phases(n), {0, 0, 2, 0});
      CHECK(rel_err(t.centered_anomalous[0], sq - mean * mean) < 1e-12);
    }
  }
  SUBCASE("undriven atoms give an all-zero table") {
    const auto t = covariance_table(random_phases(4, rng), steady_state({1.0, 0.5, 0.0, 0.0}));
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(t.mean[i]) == 0.0);
      CHECK(std::abs(t.anomalous[i]) == 0.0);
      for (int j = 0; j < 2; ++j) CHECK(std::abs(t.second[i][j]) == 0.0);
    }
  }
}

TEST_CASE("moment powers validation") {
  const auto ps = zero_phases(2);
  CHECK_THROWS(moment(ps, {}, {0, 0, 0, 0}));
  CHECK_THROWS(moment(ps, {}, {-1, 0, 1, 0}));
}

TEST_CASE("engine handles a hundred atoms") {
  std::mt19937_64 rng(8);
  const auto ps = random_phases(120, rng);
  const auto s = state_for_ratio(2.5);
  const auto t = covariance_table(ps, s);
  CHECK(rel_err(moment(ps, s, {1, 0, 0, 1}), t.second[0][1]) < 1e-11);
  const cplx m4 = moment(ps, s, {1, 1, 1, 1});
  CHECK(std::isfinite(m4.real()));
}
