#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "resfluor/atom_dynamics.hpp"
#include "resfluor/config.hpp"
#include "resfluor/geometry.hpp"
#include "resfluor/ion_trap.hpp"

namespace resfluor {

/// Atomic state selected by the config: explicit Rabi frequency or target ratio.
AtomParameters resolved_atom(const ExperimentConfig& cfg);
AtomicSteadyState resolved_state(const ExperimentConfig& cfg);

/// Directions from the config with atoms on the z axis at the given positions
/// (wavelength units); detector 2 at azimuth cfg.phi2.
SceneGeometry config_scene(const ExperimentConfig& cfg, const std::vector<Vec3>& positions);
std::vector<Vec3> chain_positions(int n_atoms, double spacing);

/// Largest |engine - oracle| / scale seen while re-validating; nullopt when
/// nothing was eligible (N > 6).
using VerifyResult = std::optional<double>;
constexpr int kVerifyMaxAtoms = 6;
constexpr double kVerifyTolerance = 1e-10;

struct AngleScan {
  std::vector<int> n_atoms;
  std::vector<double> phi2;
  std::vector<std::vector<double>> mu_normalized;  // [atom-count index][angle index]
  VerifyResult verify_deviation;
};

AngleScan run_angle_scan(const ExperimentConfig& cfg, bool verify = false);

struct ScaleOptimum {
  int n_atoms = 0;
  double gamma_lambda = 0.0;
  double ideal_mu = 0.0;
  double perfect_mu = 0.0;  // all phases zero, |s1| = |s2| = N
  double delta_z_lambda = 0.0;
  VerifyResult verify_deviation;
};

/// Minimizes the jitter-free minor over the trap scale gamma in [gamma_min, gamma_max]:
/// dense grid, golden-section polish of every competitive local minimum,
/// ties (within 1e-9 of the minor's scale) resolved towards the smaller gamma.
ScaleOptimum optimize_scale(int n_atoms, const SceneGeometry& scene_template,
                            const AtomicSteadyState& state, double gamma_min, double gamma_max,
                            const IonSpecies& species = {}, bool verify = false);
ScaleOptimum optimize_scale(const ExperimentConfig& cfg, int n_atoms, bool verify = false);

struct McReport {
  int n_atoms = 0;
  std::size_t samples = 0;
  double mean_mu = 0.0;
  double stderr_mu = 0.0;
  double mean_mu_normalized = 0.0;
  double relative_negativity = 0.0;  // mean_mu / ideal_mu
  double quantile_05 = 0.0;
  double quantile_95 = 0.0;
  double gamma_opt_lambda = 0.0;
  std::uint64_t seed = 0;
  double ideal_mu = 0.0;
  double delta_z_lambda = 0.0;
  VerifyResult verify_deviation;
};

/// Jitter campaign at the optimized scale. Results depend on (cfg, seed) only,
/// not on the worker count. Throws ConfigInvalid without a seed and
/// NonNegativeIdeal when the jitter-free minor is exactly zero.
McReport run_monte_carlo(const ExperimentConfig& cfg, int n_atoms, unsigned workers = 1,
                         bool verify = false);

struct RandomEnsembleReport {
  int n_atoms = 0;
  std::size_t samples = 0;
  double box_lambda = 0.0;
  double mean_mu = 0.0;
  double stderr_mu = 0.0;
  double lower_99 = 0.0;  // one-sided 99% lower confidence bound of the mean
  double upper_99 = 0.0;
  double regular_mu = 0.0;  // same atoms with every phase zeroed
  bool mean_positive = false;
  std::uint64_t seed = 0;
};

/// Atoms uniform in a cube of side box_lambda (>= 20) over >= 1000 configurations.
RandomEnsembleReport run_random_ensemble(const ExperimentConfig& cfg, int n_atoms,
                                         unsigned workers = 1);

struct ThresholdRow {
  int n_atoms = 0;
  double gamma2 = 0.0;
  double detuning = 0.0;
  std::optional<double> rabi_max;     // entanglement in the phase-free arrangement
  std::optional<double> growth;       // rabi_max / rabi_max at N = 1
  std::optional<double> squeeze_rabi_max;
};

std::vector<ThresholdRow> run_threshold_map(const ExperimentConfig& cfg);

/// Expected growth sqrt(((N+1)/2 - g2) / (1 - g2)) of the bound relative to N = 1.
std::optional<double> expected_growth(int n_atoms, double gamma2);

/// Compensated (Neumaier) sum in the given order.
double neumaier_sum(const std::vector<double>& xs);
/// Linear-interpolation quantile of already sorted data.
double sorted_quantile(const std::vector<double>& sorted, double q);

}  // namespace resfluor
