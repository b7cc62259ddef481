#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "resfluor/constants.hpp"
#include "resfluor/geometry.hpp"

namespace resfluor {

/// Mass, charge and optical transition wavelength of the trapped species.
struct IonSpecies {
  double mass_kg = 3.3309e-25;
  double charge_c = si::elementary_charge;
  double wavelength_m = 194.2e-9;

  static IonSpecies mercury() { return {}; }
};

/// Dimensionless equilibrium positions u_n of N ions in a harmonic axial
/// potential with Coulomb repulsion: u_m = sum_{n<m} (u_m-u_n)^-2 - sum_{n>m} (u_n-u_m)^-2.
/// Solved by damped Newton iteration; throws NoConvergence on failure.
std::vector<double> equilibrium_positions(int n_ions);

/// Largest absolute force imbalance of a dimensionless configuration.
double force_residual(std::span<const double> u);

struct PositionUncertainty {
  double meters;
  double lambda;
};

/// Harmonic-oscillator ground-state spread of one ion for trap scale gamma
/// (given in wavelengths): dz = (4 pi eps0 hbar^2 gamma^3 / (M Q^2))^(1/4).
PositionUncertainty position_uncertainty(double gamma_lambda, const IonSpecies& species);

/// Trap scale (in wavelengths) at which position_uncertainty reaches jitter_cap_lambda.
double max_scale(const IonSpecies& species, double jitter_cap_lambda = 0.1);

struct IonChain {
  int count = 0;
  double scale_lambda = 0.0;       // gamma
  std::vector<double> positions;   // dimensionless u_n, increasing
  IonSpecies species;
  double delta_z_m = 0.0;
  double delta_z_lambda = 0.0;

  /// Jitter-free positions gamma * u_n on the z axis, in wavelengths.
  std::vector<Vec3> ideal_positions() const;
};

IonChain make_chain(int n_ions, double scale_lambda, const IonSpecies& species = {});

/// Independent generator for sample `sample_index` of a run seeded with `seed`.
std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t sample_index);

enum class JitterDistribution { Uniform, TruncatedGaussian };

/// Positions (0, 0, gamma u_n + delta_n) with independent axial deviations
/// bounded by chain.delta_z_lambda. Uniform on [-dz, dz], or Gaussian with
/// sigma = dz/2 cut at +-dz. The stream depends only on (seed, sample_index).
std::vector<Vec3> sample_jittered_positions(const IonChain& chain, JitterDistribution distribution,
                                            std::uint64_t seed, std::uint64_t sample_index = 0);

}  // namespace resfluor
