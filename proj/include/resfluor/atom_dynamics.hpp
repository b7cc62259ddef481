#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace resfluor {

/// Driving and relaxation rates of one two-level atom, all in units of the
/// energy relaxation rate (gamma1 is kept explicit so ratios stay readable).
struct AtomParameters {
  double gamma1 = 1.0;
  double gamma2 = 0.5;
  double rabi = 0.0;
  double detuning = 0.0;

  /// Throws InvalidParameters unless gamma1 > 0, gamma2 >= gamma1/2, rabi >= 0.
  void validate() const;
};

/// Stationary single-atom density-matrix elements. sigma21 is the expectation
/// value of the lowering flip operator |1><2|.
struct AtomicSteadyState {
  double sigma22 = 0.0;
  std::complex<double> sigma21{0.0, 0.0};

  double coherence_sq() const { return std::norm(sigma21); }
  /// sigma22 - |sigma21|^2, the incoherent part of the emission.
  double incoherent() const { return sigma22 - coherence_sq(); }
  std::complex<double> sigma12() const { return std::conj(sigma21); }
};

/// True when (sigma22, sigma21) is a valid 2x2 density matrix (within slack).
bool is_physical(const AtomicSteadyState& s, double slack = 1e-14);

AtomicSteadyState steady_state(const AtomParameters& params);

/// sigma22 / |sigma21|^2 in closed form. Throws InvalidParameters for rabi == 0.
double coherence_ratio(const AtomParameters& params);

/// Inverse of coherence_ratio in the Rabi frequency.
double rabi_for_ratio(double target_ratio, double gamma1, double gamma2, double detuning);

/// Steady state of the radiatively damped, resonantly driven atom whose
/// coherence ratio equals target_ratio.
AtomicSteadyState state_for_ratio(double target_ratio, double gamma2 = 0.5, double detuning = 0.0);

/// Largest Rabi frequency for which N atoms in the optimal configuration still
/// produce a negative minor. Empty when no drive strength works.
std::optional<double> entanglement_rabi_bound(int n_atoms, double gamma1, double gamma2,
                                              double detuning);

struct BlochSample {
  double time;
  AtomicSteadyState state;
};

/// Integrates the optical Bloch equations with adaptive Dormand-Prince steps
/// and returns every accepted step (including t = 0 and t = horizon).
std::vector<BlochSample> bloch_integrate(const AtomParameters& params,
                                         const AtomicSteadyState& initial, double horizon,
                                         double tolerance = 1e-12);

}  // namespace resfluor
