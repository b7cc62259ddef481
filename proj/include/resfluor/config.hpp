#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "resfluor/geometry.hpp"
#include "resfluor/ion_trap.hpp"

namespace resfluor {

/// Fully resolved experiment settings. Every field has a default; a config
/// file overrides individual dotted keys (see `apply`).
struct ExperimentConfig {
  // atoms.*
  std::vector<int> n_atoms{2, 3, 4};
  double gamma2 = 0.5;  // in units of gamma1
  double detuning = 0.0;
  std::optional<double> rabi;
  double target_ratio = 3.5;

  // scene.*
  double spacing_lambda = 10.0;
  bool trap = false;
  Vec3 dipole = Vec3::UnitX();
  Vec3 laser = Vec3::UnitZ();
  Vec3 detector1 = Vec3::UnitY();
  double phi2 = 0.78539816339744831;  // detector 2 azimuth for single-angle runs
  double phi2_start = 0.0;
  double phi2_stop = 6.2831853071795862;
  int phi2_steps = 361;

  // trap.*
  IonSpecies species;
  double jitter_cap_lambda = 0.1;

  // mc.*
  std::size_t mc_samples = 100000;
  std::optional<std::uint64_t> seed;
  JitterDistribution distribution = JitterDistribution::Uniform;
  double jitter_scale = 1.0;

  // opt.*
  double gamma_min_lambda = 0.5;
  std::optional<double> gamma_max_lambda;  // defaults to max_scale(species, jitter_cap)

  // random.*
  double box_lambda = 50.0;
  std::size_t random_samples = 1000;

  // threshold.*
  std::vector<int> threshold_n{1, 2, 3, 4, 5, 10, 20, 50, 100};
  std::vector<double> threshold_gamma2{0.5, 0.75, 1.0, 1.5, 2.0, 3.0};
  std::vector<double> threshold_detuning{0.0, 1.0};

  /// Sets one dotted key. Throws ConfigInvalid for unknown keys or bad values.
  void apply(const std::string& key, const std::string& value);
  /// Checks cross-field invariants; throws ConfigInvalid.
  void validate() const;

  double resolved_gamma_max() const;
  /// Canonical key -> value text of every setting, for provenance.
  std::map<std::string, std::string> resolved() const;
};

/// Parses `key = value` lines; `#` starts a comment.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace resfluor
