// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "resfluor/atom_dynamics.hpp"
#include "resfluor/correlation.hpp"
#include "resfluor/experiment.hpp"
#include "resfluor/ion_trap.hpp"
#include "resfluor/oracle.hpp"
#include "resfluor/output.hpp"
#include "resfluor/witness.hpp"

using namespace resfluor;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

template <class... Args>
std::string format(const char* fmt, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return Vec3(g(rng), g(rng), g(rng)).normalized();
}

Outcome threshold_equivalence() {
  std::size_t points = 0, mismatches = 0, skipped = 0;
  for (int n = 1; n <= 10; ++n)
    for (double g2 : linspace(0.5, 6.0, 12))
      for (double det : linspace(0.0, 5.0, 6))
        for (double rabi : linspace(10.0 / 15, 10.0, 15)) {
          const auto bound = entanglement_rabi_bound(n, 1.0, g2, det);
          ++points;
          const double ratio = coherence_ratio({1.0, g2, rabi, det});
          if (!bound) {
            // no drive gives entanglement: the ratio never drops below N + 1
            if (ratio < n + 1 - 1e-9) ++mismatches;
            continue;
          }
          const double a = ratio - (n + 1);
          const double b = *bound * *bound - rabi * rabi;
          if (std::abs(a) < 1e-9 * (n + 1) || std::abs(b) < 1e-9 * std::max(1.0, rabi * rabi)) {
            ++skipped;
            continue;
          }
          if ((a > 0) != (b < 0)) ++mismatches;
        }
  return {points >= 10000 && mismatches == 0,
          format("%zu grid points, %zu mismatches, %zu on the boundary", points, mismatches, skipped)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> pos(-15.0, 15.0), ratio(1.2, 12.0), g2(0.5, 3.0), det(-3.0, 3.0);
  double worst_minor = 0.0, worst_moment = 0.0;
  std::size_t scenes = 0, moments = 0;
  for (int n = 1; n <= 6; ++n) {
    for (int k = 0; k < 200; ++k) {
      const double gamma2 = g2(rng);
      const double target = 2.0 * gamma2 + ratio(rng);
      const auto state = state_for_ratio(target, gamma2, det(rng));
      SceneGeometry scene;
      scene.laser_direction = random_unit(rng);
      scene.dipole_direction = random_unit(rng);
      scene.detector1 = random_unit(rng);
      scene.detector2 = random_unit(rng);
      for (int a = 0; a < n; ++a) scene.atom_positions.emplace_back(pos(rng), pos(rng), pos(rng));
      const auto eval = minor_mu(scene, state);
      const auto joint = oracle::build_joint_state(state, n);
      const double exact = oracle::oracle_minor(joint, scene);
      worst_minor = std::max(worst_minor, std::abs(eval.mu_full - exact) / eval.scale);
      ++scenes;
      if (k < 5) {
        const auto phases = phase_factors(scene);
        for (int p = 0; p <= 4; ++p)
          for (int q = 0; p + q <= 4; ++q)
            for (int r = 0; p + q + r <= 4; ++r)
              for (int s = 0; p + q + r + s <= 4; ++s) {
                if (p + q + r + s == 0) continue;
                const MomentSpec spec{p, q, r, s};
                worst_moment = std::max(
                    worst_moment, std::abs(moment(phases, state, spec) - oracle::oracle_moment(joint, phases, spec)));
                ++moments;
              }
      }
    }
  }
  return {worst_minor < 1e-10 && worst_moment < 1e-10,
          format("%zu scenes, max minor deviation %.2e; %zu moments, max deviation %.2e", scenes,
                 worst_minor, moments, worst_moment)};
}

Outcome angle_scan_reproduction() {
  ExperimentConfig cfg;  // rho = 3.5, 10 lambda spacing, N = 2, 3, 4
  cfg.phi2_steps = 721;
  const auto scan = run_angle_scan(cfg, true);
  bool signs = true;
  for (std::size_t k = 0; k < scan.phi2.size(); ++k) {
    const bool axis = std::abs(std::remainder(scan.phi2[k], pi / 2)) < 1e-9;
    if (scan.mu_normalized[0][k] < -1e-12) signs = false;
    for (int c : {1, 2}) {
      const double v = scan.mu_normalized[c][k];
      if (axis ? std::abs(v) > 1e-12 : !(v < 0.0)) signs = false;
    }
  }
  cfg.phi2_start = pi / 4;
  cfg.phi2_steps = 1;
  const auto at = run_angle_scan(cfg, true);
  const double expected[] = {0.045918, -0.056122, -0.198980};
  double worst = 0.0;
  for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(at.mu_normalized[c][0] - expected[c]));
  const double verify = std::max(*scan.verify_deviation, *at.verify_deviation);
  return {signs && worst < 1e-6 && verify < 1e-10,
          format("sign structure %s; pi/4 values %.6f %.6f %.6f (max error %.1e); oracle deviation %.1e",
                 signs ? "ok" : "broken", at.mu_normalized[0][0], at.mu_normalized[1][0],
                 at.mu_normalized[2][0], worst, verify)};
}

Outcome single_atom_coincidence() {
  const auto g1 = emission_vector(Vec3::UnitY(), Vec3::UnitX());
  const auto g2 = emission_vector(azimuth_direction(pi / 4), Vec3::UnitX());
  const auto phases = zero_phases(1);
  std::size_t points = 0, mismatches = 0, skipped = 0;
  for (double gamma2 : linspace(0.5, 6.0, 23))
    for (double det : linspace(0.0, 5.0, 11))
      for (double rabi : linspace(0.05, 10.0, 40)) {
        ++points;
        const AtomParameters p{1.0, gamma2, rabi, det};
        const auto s = steady_state(p);
        const double ratio = coherence_ratio(p);
        if (std::abs(ratio - 2.0) < 1e-9) {
          ++skipped;
          continue;
        }
        const auto eval = evaluate_minor(phases, g1, g2, s);
        const double sq = squeezing_witness(phases, s, g1, 0);
        const bool entangled = eval.mu_full < 0.0;
        const bool squeezed = sq < 0.0;
        if (entangled != squeezed || entangled != (ratio < 2.0)) ++mismatches;
      }
  return {mismatches == 0, format("%zu points, %zu mismatches, %zu on the boundary", points, mismatches, skipped)};
}

Outcome trap_numerics() {
  const auto hg = IonSpecies::mercury();
  const double dz = position_uncertainty(1.0, hg).meters;
  const double gmax = max_scale(hg, 0.1);
  const auto u2 = equilibrium_positions(2);
  const auto u3 = equilibrium_positions(3);
  const double a2 = std::cbrt(0.25), a3 = std::cbrt(1.25);
  double analytic = std::max({std::abs(u2[0] + a2), std::abs(u2[1] - a2), std::abs(u3[0] + a3),
                              std::abs(u3[1]), std::abs(u3[2] - a3)});
  double residual = 0.0;
  for (int n = 1; n <= 64; ++n) residual = std::max(residual, force_residual(equilibrium_positions(n)));
  const bool ok = std::abs(dz / 1.014e-9 - 1.0) <= 0.005 && gmax >= 49.0 && gmax <= 53.0 &&
                  analytic < 1e-9 && residual < 1e-12;
  return {ok, format("dz(lambda) = %.5e m, gamma_max = %.3f lambda, analytic error %.1e, max residual %.1e",
                     dz, gmax, analytic, residual)};
}

Outcome monte_carlo() {
  ExperimentConfig cfg;
  cfg.seed = 20240611;
  cfg.mc_samples = 100000;
  std::string detail;
  bool ok = true;
  for (int n : {2, 3, 4}) {
    const auto r = run_monte_carlo(cfg, n, 1);
    const bool pass = n < 4 ? r.relative_negativity >= 0.99
                            : r.relative_negativity >= 0.978 && r.relative_negativity <= 0.998;
    ok = ok && pass;
    detail += format("N=%d R=%.4f (gamma*=%.3f, dz=%.4f)%s; ", n, r.relative_negativity,
                     r.gamma_opt_lambda, r.delta_z_lambda, pass ? "" : " out of range");
  }
  // the same seed must reproduce the same report
  cfg.mc_samples = 5000;
  const auto a = render(monte_carlo_table({run_monte_carlo(cfg, 4, 1)}), cfg, Format::Json);
  const auto b = render(monte_carlo_table({run_monte_carlo(cfg, 4, 1)}), cfg, Format::Json);
  ok = ok && a == b;
  detail += a == b ? "repeatable" : "NOT repeatable";
  return {ok, detail};
}

Outcome non_gaussianity() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ph(0.0, 2 * pi);
  const auto state = state_for_ratio(3.5);
  std::size_t checked = 0, nonzero = 0;
  for (int n = 1; n <= 6; ++n) {
    std::vector<std::array<double, 2>> raw(n);
    for (auto& a : raw) a = {ph(rng), ph(rng)};
    const auto phases = phase_sums_from(raw);
    const auto joint = oracle::build_joint_state(state, n);
    for (int raising = n + 1; raising <= n + 2; ++raising)
      for (int p = 0; p <= raising; ++p)
        for (int lowering = 0; lowering <= n + 2; ++lowering)
          for (int r = 0; r <= lowering; ++r) {
            // too many raising factors, and the mirrored case
            for (const MomentSpec spec : {MomentSpec{p, raising - p, r, lowering - r},
                                          MomentSpec{r, lowering - r, p, raising - p}}) {
              ++checked;
              if (moment(phases, state, spec) != 0.0) ++nonzero;
              if (oracle::oracle_moment(joint, phases, spec) != 0.0) ++nonzero;
            }
          }
  }
  return {nonzero == 0, format("%zu overflowing moments, %zu not exactly zero", checked, nonzero)};
}

Outcome random_null() {
  ExperimentConfig cfg;
  cfg.seed = 20240611;
  cfg.box_lambda = 50.0;
  cfg.random_samples = 1000;
  const auto r = run_random_ensemble(cfg, 3, 1);
  return {r.mean_positive && r.regular_mu < 0.0,
          format("random mean %.5f, 99%% lower bound %.5f; regular %.5f", r.mean_mu, r.lower_99, r.regular_mu)};
}

Outcome robustness_vs_squeezing() {
  const int n = 4;
  const double gamma2 = 1.5;
  const auto bound = entanglement_rabi_bound(n, 1.0, gamma2, 0.0);
  if (!bound) return {false, "no entangling drive exists"};
  const auto g1 = emission_vector(Vec3::UnitY(), Vec3::UnitX());
  const auto g2 = emission_vector(azimuth_direction(pi / 4), Vec3::UnitX());
  const auto phases = zero_phases(n);
  // strongest witness among drives below the bound
  std::optional<Outcome> best;
  double best_norm = 0.0;
  for (double frac : linspace(0.05, 0.95, 19)) {
    const double rabi = frac * *bound;
    const auto s = steady_state({1.0, gamma2, rabi, 0.0});
    const auto eval = evaluate_minor(phases, g1, g2, s);
    if (!eval.entangled) continue;
    double least = std::numeric_limits<double>::infinity();
    for (int d = 0; d < 2; ++d)
      for (double theta : linspace(0.0, 2 * pi, 721))
        least = std::min(least, quadrature_variance(phases, s, d == 0 ? g1 : g2, d, theta));
    const double norm = normalized_minor(eval, s, n);
    if (least >= 0.0 && norm < best_norm) {
      best_norm = norm;
      best = Outcome{true, format("Omega = %.4f (%.2f of the bound): normalized mu = %.4f, min quadrature "
                                  "variance %.3e",
                                  rabi, frac, norm, least)};
    }
  }
  if (best) return *best;
  return {false, "no drive with entanglement but without squeezing"};
}

Outcome determinism() {
  ExperimentConfig cfg;
  cfg.seed = 99;
  cfg.mc_samples = 20000;
  cfg.random_samples = 2000;
  std::vector<std::string> outputs;
  for (unsigned workers : {1u, 4u, 16u}) {
    std::vector<McReport> mc;
    std::vector<RandomEnsembleReport> rnd;
    for (int n : cfg.n_atoms) {
      mc.push_back(run_monte_carlo(cfg, n, workers));
      rnd.push_back(run_random_ensemble(cfg, n, workers));
    }
    outputs.push_back(render(monte_carlo_table(mc), cfg, Format::Json) +
                      render(monte_carlo_table(mc), cfg, Format::Csv) +
                      render(random_table(rnd), cfg, Format::Json) + render(random_table(rnd), cfg, Format::Csv));
  }
  const bool same = outputs[0] == outputs[1] && outputs[1] == outputs[2];
  return {same, format("mc + random outputs with 1/4/16 workers %s (%zu bytes)",
                       same ? "byte-identical" : "DIFFER", outputs[0].size())};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double time_limit_s;
  };
  const std::vector<Criterion> criteria = {
      {"threshold equivalence", threshold_equivalence, 5.0},
      {"oracle equivalence", oracle_equivalence, 60.0},
      {"angle-scan reproduction", angle_scan_reproduction, 1.0},
      {"single-atom coincidence", single_atom_coincidence, 5.0},
      {"trap numerics", trap_numerics, 5.0},
      {"monte carlo robustness", monte_carlo, 120.0},
      {"non-gaussianity", non_gaussianity, 60.0},
      {"random-position null result", random_null, 60.0},
      {"robustness vs squeezing", robustness_vs_squeezing, 60.0},
      {"determinism", determinism, 120.0},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > criteria[i].time_limit_s) {
      out.pass = false;
      out.detail += format(" [over time limit %.0f s]", criteria[i].time_limit_s);
    }
    if (!out.pass) ++failures;
    std::printf("%s %2zu %-28s %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
