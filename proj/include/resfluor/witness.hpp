#pragma once

#include <optional>
#include <vector>

#include "resfluor/atom_dynamics.hpp"
#include "resfluor/correlation.hpp"
#include "resfluor/geometry.hpp"

namespace resfluor {

/// Result of the 3x3 field-moment minor. A negative mu certifies bipartite
/// entanglement between the two observation directions; a non-negative one
/// means "not detected", not "separable".
struct MinorEvaluation {
  double mu_full = 0.0;        // determinant with Cartesian contraction of field vectors
  double mu_closed = 0.0;      // closed form in the phase sums
  double cross_term = 0.0;     // mu_full - mu_closed
  double mu_normalized = 0.0;  // mu_full / (N^2 sigma22^2), 0 for an undriven atom
  double scale = 0.0;          // g1^2 g2^2 N^2 sigma22^2, reference for the zero test
  bool entangled = false;
  bool degenerate = false;     // a pattern vector vanished; mu is identically zero
};

/// Minor for explicit pattern vectors and phase sums (hot path for Monte Carlo).
MinorEvaluation evaluate_minor(const PhaseSums& phases, const Vec3& g1, const Vec3& g2,
                               const AtomicSteadyState& state);

MinorEvaluation minor_mu(const SceneGeometry& scene, const AtomicSteadyState& state);

/// mu_full / (N^2 sigma22^2). Throws UndrivenAtom when sigma22 == 0.
double normalized_minor(const MinorEvaluation& eval, const AtomicSteadyState& state,
                        std::size_t n_atoms);

/// sigma22 / |sigma21|^2 < N + 1. Throws UndrivenAtom when sigma21 == 0.
bool ratio_condition(int n_atoms, const AtomicSteadyState& state);

/// Normally ordered variance of the detector-j quadrature at the given phase.
double quadrature_variance(const PhaseSums& phases, const AtomicSteadyState& state,
                           const Vec3& g, int detector, double quadrature_phase);

/// Minimum over the quadrature phase of quadrature_variance; negative means
/// squeezed light in direction j.
double squeezing_witness(const PhaseSums& phases, const AtomicSteadyState& state, const Vec3& g,
                         int detector);

/// The two principal 2x2 minors containing the unit entry, scaled by g_j^2.
std::vector<double> two_by_two_minors(const PhaseSums& phases, const AtomicSteadyState& state,
                                      const SceneGeometry& scene);

struct DrivePolicy {
  enum class Kind { Fixed, BelowBound };
  Kind kind = Kind::BelowBound;
  double rabi = 1.0;       // used by Fixed
  double fraction = 0.5;   // used by BelowBound: Omega = fraction * Omega_max

  static DrivePolicy fixed(double rabi) { return {Kind::Fixed, rabi, 0.5}; }
  static DrivePolicy below_bound(double fraction = 0.5) { return {Kind::BelowBound, 1.0, fraction}; }
};

struct DephasingRow {
  double gamma2_ratio;
  std::optional<double> rabi_entangle;  // drive used for the minor
  std::optional<double> rabi_squeeze;   // drive used for the squeezing witness
  bool entangled;
  bool squeezed;
};

/// Evaluates the minor and the squeezing witness in the optimal (phase-free)
/// configuration over a range of dephasing rates (gamma1 = 1).
std::vector<DephasingRow> dephasing_scan(int n_atoms, const std::vector<double>& gamma2_ratios,
                                         const DrivePolicy& policy, double detuning = 0.0);

}  // namespace resfluor
