#include "resfluor/witness.hpp"

#include <cmath>

#include "resfluor/error.hpp"

namespace resfluor {

namespace {

constexpr double kZeroPattern = 1e-12;
constexpr double kEntangledTolerance = 1e-12;

}  // namespace

MinorEvaluation evaluate_minor(const PhaseSums& phases, const Vec3& g1, const Vec3& g2,
                               const AtomicSteadyState& state) {
  MinorEvaluation ev;
  const auto n = static_cast<double>(phases.size());
  const double g1sq = g1.squaredNorm();
  const double g2sq = g2.squaredNorm();
  if (g1.norm() < kZeroPattern || g2.norm() < kZeroPattern) {
    ev.degenerate = true;
    return ev;
  }
  const double overlap = g1.dot(g2);
  const double gg = g1sq * g2sq;

  // Determinant of [[1, g1 c1, g2 c2], [g1 c1*, g1^2 m11, G m12], [g2 c2*, G m21, g2^2 m22]]
  // where vector entries contract pairwise in every Leibniz term.
  const CovarianceTable t = covariance_table(phases, state);
  const auto& c = t.mean;
  const double m11 = t.second[0][0].real();
  const double m22 = t.second[1][1].real();
  const std::complex<double> m12 = t.second[0][1];
  ev.mu_full = gg * (m11 * m22 - std::norm(c[0]) * m22 - std::norm(c[1]) * m11) -
               overlap * overlap * (std::norm(m12) - 2.0 * (c[0] * std::conj(c[1]) * m12).real());

  const double beta = state.incoherent();
  const double coh = state.coherence_sq();
  const double cos_sq = overlap * overlap / gg;
  const double sin_sq = 1.0 - cos_sq;
  ev.mu_closed = gg * (n * n * beta * beta - cos_sq * beta * beta * std::norm(phases.s12) -
                    sin_sq * coh * coh * std::norm(phases.s1) * std::norm(phases.s2));
  ev.cross_term = ev.mu_full - ev.mu_closed;

  ev.scale = gg * n * n * state.sigma22 * state.sigma22;
  ev.entangled = ev.mu_full < -kEntangledTolerance * ev.scale;
  if (state.sigma22 > 0.0) ev.mu_normalized = ev.mu_full / (n * n * state.sigma22 * state.sigma22);
  return ev;
}

MinorEvaluation minor_mu(const SceneGeometry& scene, const AtomicSteadyState& state) {
  const PhaseSums phases = phase_factors(scene);
  const Vec3 g1 = emission_vector(scene.detector1, scene.dipole_direction);
  const Vec3 g2 = emission_vector(scene.detector2, scene.dipole_direction);
  return evaluate_minor(phases, g1, g2, state);
}

double normalized_minor(const MinorEvaluation& eval, const AtomicSteadyState& state,
                        std::size_t n_atoms) {
  if (state.sigma22 == 0.0) throw Error(ErrorCode::UndrivenAtom, "sigma22 is zero");
  const auto n = static_cast<double>(n_atoms);
  return eval.mu_full / (n * n * state.sigma22 * state.sigma22);
}

bool ratio_condition(int n_atoms, const AtomicSteadyState& state) {
  if (state.coherence_sq() == 0.0) throw Error(ErrorCode::UndrivenAtom, "sigma21 is zero");
  return state.sigma22 / state.coherence_sq() < n_atoms + 1;
}

double quadrature_variance(const PhaseSums& phases, const AtomicSteadyState& state,
                           const Vec3& g, int detector, double quadrature_phase) {
  const CovarianceTable t = covariance_table(phases, state);
  const std::complex<double> rot(std::cos(2.0 * quadrature_phase), std::sin(2.0 * quadrature_phase));
  return g.squaredNorm() * (2.0 * t.centered[detector][detector].real() +
                            2.0 * (rot * t.centered_anomalous[detector]).real());
}

double squeezing_witness(const PhaseSums& phases, const AtomicSteadyState& state, const Vec3& g,
                         int detector) {
  if (detector != 0 && detector != 1)
    throw Error(ErrorCode::InvalidParameters, "detector index must be 0 or 1");
  const CovarianceTable t = covariance_table(phases, state);
  return 2.0 * g.squaredNorm() *
         (t.centered[detector][detector].real() - std::abs(t.centered_anomalous[detector]));
}

std::vector<double> two_by_two_minors(const PhaseSums& phases, const AtomicSteadyState& state,
                                      const SceneGeometry& scene) {
  const CovarianceTable t = covariance_table(phases, state);
  const Vec3 g1 = emission_vector(scene.detector1, scene.dipole_direction);
  const Vec3 g2 = emission_vector(scene.detector2, scene.dipole_direction);
  return {g1.squaredNorm() * t.centered[0][0].real(), g2.squaredNorm() * t.centered[1][1].real()};
}

std::vector<DephasingRow> dephasing_scan(int n_atoms, const std::vector<double>& gamma2_ratios,
                                         const DrivePolicy& policy, double detuning) {
  if (n_atoms < 1) throw Error(ErrorCode::InvalidParameters, "n_atoms must be positive");
  const PhaseSums phases = zero_phases(n_atoms);
  // Representative non-degenerate pair of pattern vectors (theta = pi/4).
  const Vec3 g1 = Vec3::UnitX();
  const Vec3 g2 = emission_vector(azimuth_direction(std::acos(-1.0) / 4.0), Vec3::UnitX());

  std::vector<DephasingRow> rows;
  rows.reserve(gamma2_ratios.size());
  for (double gamma2 : gamma2_ratios) {
    if (gamma2 < 0.5)
      throw Error(ErrorCode::InvalidParameters, "gamma2/gamma1 must be at least 1/2");
    DephasingRow row{gamma2, std::nullopt, std::nullopt, false, false};
    if (policy.kind == DrivePolicy::Kind::Fixed) {
      row.rabi_entangle = row.rabi_squeeze = policy.rabi;
    } else {
      if (auto bound = entanglement_rabi_bound(n_atoms, 1.0, gamma2, detuning))
        row.rabi_entangle = policy.fraction * *bound;
      // The phase-free squeezing condition does not depend on N; it is the
      // single-atom entanglement bound.
      if (auto bound = entanglement_rabi_bound(1, 1.0, gamma2, detuning))
        row.rabi_squeeze = policy.fraction * *bound;
    }
    if (row.rabi_entangle) {
      const auto s = steady_state({1.0, gamma2, *row.rabi_entangle, detuning});
      row.entangled = evaluate_minor(phases, g1, g2, s).entangled;
    }
    if (row.rabi_squeeze) {
      const auto s = steady_state({1.0, gamma2, *row.rabi_squeeze, detuning});
      const double w = squeezing_witness(phases, s, g1, 0);
      row.squeezed = w < -kEntangledTolerance * g1.squaredNorm() * n_atoms * s.sigma22;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace resfluor
