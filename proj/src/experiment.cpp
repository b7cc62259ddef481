#include "resfluor/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "resfluor/error.hpp"
#include "resfluor/golden_section.hpp"
#include "resfluor/oracle.hpp"
#include "resfluor/witness.hpp"

namespace resfluor {

namespace {

// Runs body(i) for i in [0, count) on up to `workers` threads. Each index is
// handled exactly once; callers write into index-addressed slots only.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  constexpr std::size_t chunk = 256;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto run = [&] {
    try {
      for (;;) {
        const std::size_t begin = next.fetch_add(chunk);
        if (begin >= count || failed.load()) return;
        const std::size_t end = std::min(count, begin + chunk);
        for (std::size_t i = begin; i < end; ++i) body(i);
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double verify_scene(const SceneGeometry& scene, const AtomicSteadyState& state) {
  const auto engine = minor_mu(scene, state);
  const auto joint = oracle::build_joint_state(state, static_cast<int>(scene.size()));
  const double exact = oracle::oracle_minor(joint, scene);
  // a vanishing pattern vector makes scale zero; fall back to the unweighted one
  const double n = static_cast<double>(scene.size());
  double ref = engine.scale > 0.0 ? engine.scale : n * n * state.sigma22 * state.sigma22;
  if (!(ref > 0.0)) ref = 1.0;
  return std::abs(engine.mu_full - exact) / ref;
}

void track(VerifyResult& worst, double dev) { worst = std::max(worst.value_or(0.0), dev); }

struct MomentStats {
  double mean;
  double stderr_mean;
};

MomentStats mean_and_error(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = neumaier_sum(xs) / n;
  std::vector<double> dev(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) dev[i] = (xs[i] - mean) * (xs[i] - mean);
  const double var = xs.size() > 1 ? neumaier_sum(dev) / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

std::uint64_t require_seed(const ExperimentConfig& cfg) {
  if (!cfg.seed) throw Error(ErrorCode::ConfigInvalid, "a seed is required for stochastic runs");
  return *cfg.seed;
}

}  // namespace

double neumaier_sum(const std::vector<double>& xs) {
  double sum = 0.0, c = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) c += (sum - t) + x;
    else c += (x - t) + sum;
    sum = t;
  }
  return sum + c;
}

double sorted_quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

AtomParameters resolved_atom(const ExperimentConfig& cfg) {
  AtomParameters p;
  p.gamma1 = 1.0;
  p.gamma2 = cfg.gamma2;
  p.detuning = cfg.detuning;
  p.rabi = cfg.rabi ? *cfg.rabi : rabi_for_ratio(cfg.target_ratio, 1.0, cfg.gamma2, cfg.detuning);
  p.validate();
  return p;
}

AtomicSteadyState resolved_state(const ExperimentConfig& cfg) {
  return steady_state(resolved_atom(cfg));
}

SceneGeometry config_scene(const ExperimentConfig& cfg, const std::vector<Vec3>& positions) {
  SceneGeometry scene;
  scene.atom_positions = positions;
  scene.laser_direction = cfg.laser;
  scene.dipole_direction = cfg.dipole;
  scene.detector1 = cfg.detector1;
  scene.detector2 = azimuth_direction(cfg.phi2);
  return scene;
}

std::vector<Vec3> chain_positions(int n_atoms, double spacing) {
  std::vector<Vec3> out;
  for (int n = 0; n < n_atoms; ++n) out.emplace_back(0.0, 0.0, spacing * n);
  return out;
}

AngleScan run_angle_scan(const ExperimentConfig& cfg, bool verify) {
  if (cfg.trap) throw Error(ErrorCode::ConfigInvalid, "scan-angle needs a fixed-spacing chain");
  cfg.validate();
  const auto state = resolved_state(cfg);

  AngleScan scan;
  scan.n_atoms = cfg.n_atoms;
  const int steps = cfg.phi2_steps;
  for (int k = 0; k < steps; ++k) {
    const double t = steps == 1 ? 0.0 : static_cast<double>(k) / (steps - 1);
    scan.phi2.push_back(cfg.phi2_start + t * (cfg.phi2_stop - cfg.phi2_start));
  }

  for (int n : cfg.n_atoms) {
    std::vector<double> column;
    column.reserve(scan.phi2.size());
    for (double phi : scan.phi2) {
      auto scene = config_scene(cfg, chain_positions(n, cfg.spacing_lambda));
      scene.detector2 = azimuth_direction(phi);
      const auto eval = minor_mu(scene, state);
      column.push_back(normalized_minor(eval, state, n));
      if (verify && n <= kVerifyMaxAtoms) track(scan.verify_deviation, verify_scene(scene, state));
    }
    scan.mu_normalized.push_back(std::move(column));
  }
  return scan;
}

ScaleOptimum optimize_scale(int n_atoms, const SceneGeometry& scene_template,
                            const AtomicSteadyState& state, double gamma_min, double gamma_max,
                            const IonSpecies& species, bool verify) {
  if (!(gamma_min > 0.0) || !(gamma_max > gamma_min) || !std::isfinite(gamma_max))
    throw Error(ErrorCode::EmptyInterval, "trap-scale interval is empty");

  const auto u = equilibrium_positions(n_atoms);
  SceneGeometry scene = scene_template;
  scene.atom_positions.assign(n_atoms, Vec3::Zero());
  const auto ev = emission_vectors(scene);

  auto scene_at = [&](double gamma) {
    SceneGeometry s = scene;
    for (int i = 0; i < n_atoms; ++i) s.atom_positions[i] = Vec3(0.0, 0.0, gamma * u[i]);
    return s;
  };
  auto mu_at = [&](double gamma) {
    return evaluate_minor(phase_factors(scene_at(gamma)), ev.g1, ev.g2, state).mu_full;
  };

  ScaleOptimum out;
  out.n_atoms = n_atoms;
  const auto perfect = evaluate_minor(zero_phases(n_atoms), ev.g1, ev.g2, state);
  out.perfect_mu = perfect.mu_full;
  const double scale = std::max(perfect.scale, std::numeric_limits<double>::min());

  // Phase of atom n toward detector j moves at rate |k_eff,z| * u_n per unit gamma.
  const Vec3 k = scene.laser_direction;
  double k_eff = 0.0;
  for (const Vec3& e : {scene.detector1, scene.detector2})
    k_eff = std::max(k_eff, std::abs(k.z() - e.z()) / scene.wavelength);
  double u_max = 0.0;
  for (double x : u) u_max = std::max(u_max, std::abs(x));

  double best_gamma = gamma_min;
  double best_mu = mu_at(gamma_min);
  if (k_eff * u_max > 0.0) {
    const double step_max = 1.0 / (200.0 * u_max * k_eff);
    const auto steps = static_cast<std::size_t>(std::ceil((gamma_max - gamma_min) / step_max));
    const double h = (gamma_max - gamma_min) / static_cast<double>(steps);
    std::vector<double> grid(steps + 1), vals(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
      grid[i] = i == steps ? gamma_max : gamma_min + h * static_cast<double>(i);
      vals[i] = mu_at(grid[i]);
    }
    const double grid_best = *std::min_element(vals.begin(), vals.end());

    std::vector<std::pair<double, double>> candidates;  // (gamma, mu)
    for (std::size_t i = 0; i <= steps; ++i) {
      const bool left = i == 0 || vals[i] <= vals[i - 1];
      const bool right = i == steps || vals[i] <= vals[i + 1];
      if (!left || !right || vals[i] > grid_best + 1e-2 * scale) continue;
      const double lo = grid[i == 0 ? 0 : i - 1];
      const double hi = grid[i == steps ? steps : i + 1];
      auto refined = golden_section_minimize(mu_at, lo, hi, 1e-12 * std::max(1.0, hi));
      if (vals[i] < refined.second) refined = {grid[i], vals[i]};
      candidates.push_back(refined);
    }
    double refined_best = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) refined_best = std::min(refined_best, c.second);
    best_gamma = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) {
      if (c.second <= refined_best + 1e-9 * scale && c.first < best_gamma) {
        best_gamma = c.first;
        best_mu = c.second;
      }
    }
  }

  out.gamma_lambda = best_gamma;
  out.ideal_mu = best_mu;
  out.delta_z_lambda = position_uncertainty(best_gamma, species).lambda;
  if (verify && n_atoms <= kVerifyMaxAtoms)
    track(out.verify_deviation, verify_scene(scene_at(best_gamma), state));
  return out;
}

ScaleOptimum optimize_scale(const ExperimentConfig& cfg, int n_atoms, bool verify) {
  cfg.validate();
  return optimize_scale(n_atoms, config_scene(cfg, {}), resolved_state(cfg), cfg.gamma_min_lambda,
                        cfg.resolved_gamma_max(), cfg.species, verify);
}

McReport run_monte_carlo(const ExperimentConfig& cfg, int n_atoms, unsigned workers, bool verify) {
  cfg.validate();
  const std::uint64_t seed = require_seed(cfg);
  const auto state = resolved_state(cfg);
  const auto opt = optimize_scale(cfg, n_atoms, verify);
  if (opt.ideal_mu == 0.0)
    throw Error(ErrorCode::NonNegativeIdeal, "jitter-free minor vanishes; relative negativity undefined");

  IonChain chain = make_chain(n_atoms, opt.gamma_lambda, cfg.species);
  chain.delta_z_m *= cfg.jitter_scale;
  chain.delta_z_lambda *= cfg.jitter_scale;

  const auto template_scene = config_scene(cfg, chain.ideal_positions());
  const auto ev = emission_vectors(template_scene);

  const std::size_t count = cfg.mc_samples;
  std::vector<double> mus(count);
  parallel_for(count, workers, [&](std::size_t i) {
    SceneGeometry scene = template_scene;
    scene.atom_positions = sample_jittered_positions(chain, cfg.distribution, seed, i);
    mus[i] = evaluate_minor(phase_factors(scene), ev.g1, ev.g2, state).mu_full;
  });

  McReport r;
  r.n_atoms = n_atoms;
  r.samples = count;
  const auto stats = mean_and_error(mus);
  r.mean_mu = stats.mean;
  r.stderr_mu = stats.stderr_mean;
  const double n = static_cast<double>(n_atoms);
  r.mean_mu_normalized = r.mean_mu / (n * n * state.sigma22 * state.sigma22);
  r.relative_negativity = r.mean_mu / opt.ideal_mu;
  std::vector<double> sorted = mus;
  std::sort(sorted.begin(), sorted.end());
  r.quantile_05 = sorted_quantile(sorted, 0.05);
  r.quantile_95 = sorted_quantile(sorted, 0.95);
  r.gamma_opt_lambda = opt.gamma_lambda;
  r.seed = seed;
  r.ideal_mu = opt.ideal_mu;
  r.delta_z_lambda = chain.delta_z_lambda;

  if (verify && n_atoms <= kVerifyMaxAtoms) {
    r.verify_deviation = opt.verify_deviation;
    const std::size_t checked = std::min<std::size_t>(count, 1000);
    for (std::size_t i = 0; i < checked; ++i) {
      SceneGeometry scene = template_scene;
      scene.atom_positions = sample_jittered_positions(chain, cfg.distribution, seed, i);
      track(r.verify_deviation, verify_scene(scene, state));
    }
  }
  return r;
}

RandomEnsembleReport run_random_ensemble(const ExperimentConfig& cfg, int n_atoms, unsigned workers) {
  cfg.validate();
  if (cfg.box_lambda < 20.0) throw Error(ErrorCode::ConfigInvalid, "random.box_lambda must be at least 20");
  if (cfg.random_samples < 1000)
    throw Error(ErrorCode::ConfigInvalid, "random.samples must be at least 1000");
  const std::uint64_t seed = require_seed(cfg);
  const auto state = resolved_state(cfg);
  const auto template_scene = config_scene(cfg, std::vector<Vec3>(n_atoms, Vec3::Zero()));
  const auto ev = emission_vectors(template_scene);

  const std::size_t count = cfg.random_samples;
  std::vector<double> mus(count);
  parallel_for(count, workers, [&](std::size_t i) {
    auto rng = sample_stream(seed, i);
    std::uniform_real_distribution<double> coord(0.0, cfg.box_lambda);
    SceneGeometry scene = template_scene;
    for (auto& r : scene.atom_positions) {
      const double x = coord(rng), y = coord(rng), z = coord(rng);
      r = Vec3(x, y, z);
    }
    mus[i] = evaluate_minor(phase_factors(scene), ev.g1, ev.g2, state).mu_full;
  });

  RandomEnsembleReport r;
  r.n_atoms = n_atoms;
  r.samples = count;
  r.box_lambda = cfg.box_lambda;
  const auto stats = mean_and_error(mus);
  r.mean_mu = stats.mean;
  r.stderr_mu = stats.stderr_mean;
  constexpr double z99 = 2.3263478740408408;  // one-sided 99% normal quantile
  r.lower_99 = r.mean_mu - z99 * r.stderr_mu;
  r.upper_99 = r.mean_mu + z99 * r.stderr_mu;
  r.regular_mu = evaluate_minor(zero_phases(n_atoms), ev.g1, ev.g2, state).mu_full;
  r.mean_positive = r.lower_99 > 0.0;
  r.seed = seed;
  return r;
}

std::optional<double> expected_growth(int n_atoms, double gamma2) {
  if (!(gamma2 < 1.0) || !(gamma2 < (n_atoms + 1) / 2.0)) return std::nullopt;
  return std::sqrt(((n_atoms + 1) / 2.0 - gamma2) / (1.0 - gamma2));
}

std::vector<ThresholdRow> run_threshold_map(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<ThresholdRow> rows;
  for (int n : cfg.threshold_n) {
    for (double g2 : cfg.threshold_gamma2) {
      for (double det : cfg.threshold_detuning) {
        ThresholdRow row;
        row.n_atoms = n;
        row.gamma2 = g2;
        row.detuning = det;
        row.rabi_max = entanglement_rabi_bound(n, 1.0, g2, det);
        // Independent atoms in phase: the squeezing condition ratio < 2 does not depend on N.
        row.squeeze_rabi_max = entanglement_rabi_bound(1, 1.0, g2, det);
        if (row.rabi_max && row.squeeze_rabi_max && *row.squeeze_rabi_max > 0.0)
          row.growth = *row.rabi_max / *row.squeeze_rabi_max;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace resfluor
