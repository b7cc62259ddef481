#pragma once

#include <array>
#include <complex>

#include "resfluor/atom_dynamics.hpp"
#include "resfluor/geometry.hpp"

namespace resfluor {

/// Powers in the normally ordered product A1^dag^p A2^dag^q A1^r A2^s, where
/// A_j = sum_n exp(i phi_j^(n)) |1><2|_n is the scalar amplitude seen by
/// detector j.
struct MomentSpec {
  int p = 0;
  int q = 0;
  int r = 0;
  int s = 0;

  int order() const { return p + q + r + s; }
  void validate() const;
  /// Adjoint product: swaps raising and lowering powers.
  MomentSpec adjoint() const { return {r, s, p, q}; }
};

/// True when the moment vanishes identically for n_atoms emitters: more than
/// N raising or more than N lowering factors.
bool order_overflow(const MomentSpec& spec, std::size_t n_atoms);

/// Exact normally ordered moment by dynamic programming over atoms.
/// Overflowing orders come out as exact zero (see order_overflow).
std::complex<double> moment(const PhaseSums& phases, const AtomicSteadyState& state,
                            const MomentSpec& spec);

/// First and second moments of the two detected amplitudes.
struct CovarianceTable {
  std::array<std::complex<double>, 2> mean;       // <A_j>
  std::array<std::array<std::complex<double>, 2>, 2> second;    // <A_i^dag A_j>
  std::array<std::complex<double>, 2> anomalous;  // <A_j A_j>
  std::array<std::array<std::complex<double>, 2>, 2> centered;  // <dA_i^dag dA_j>
  std::array<std::complex<double>, 2> centered_anomalous;       // <dA_j dA_j>
};

CovarianceTable covariance_table(const PhaseSums& phases, const AtomicSteadyState& state);

}  // namespace resfluor
