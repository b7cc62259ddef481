#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "resfluor/atom_dynamics.hpp"
#include "resfluor/correlation.hpp"
#include "resfluor/geometry.hpp"

namespace resfluor::oracle {

constexpr int kMaxAtoms = 12;

/// Product density operator of N identical, uncorrelated atoms on the
/// 2^N-dimensional joint space. Bit n of a basis index is 1 when atom n is
/// excited. Elements are produced on demand from the 2x2 factor.
class JointState {
 public:
  JointState(const AtomicSteadyState& state, int n_atoms);

  int n_atoms() const { return n_atoms_; }
  std::size_t dimension() const { return std::size_t{1} << n_atoms_; }
  const Eigen::Matrix2cd& factor() const { return factor_; }

  /// <row| rho |col>
  std::complex<double> element(std::size_t row, std::size_t col) const;

  /// Dense 2^N x 2^N matrix; only for N <= 10.
  Eigen::MatrixXcd dense() const;

  /// Partial trace over every atom except `atom`, by explicit summation.
  Eigen::Matrix2cd reduced(int atom) const;

 private:
  int n_atoms_;
  Eigen::Matrix2cd factor_;
};

/// Throws TooLarge for n_atoms > kMaxAtoms.
JointState build_joint_state(const AtomicSteadyState& state, int n_atoms);

using SparseOp = Eigen::SparseMatrix<std::complex<double>>;

/// sum_n exp(i phi_j^(n)) |1><2|_n as an explicit sparse operator.
SparseOp detector_amplitude(int n_atoms, const PhaseSums& phases, int detector);

/// trace(rho A1^dag^p A2^dag^q A1^r A2^s) from explicit operators.
std::complex<double> oracle_moment(const JointState& joint, const PhaseSums& phases,
                                   const MomentSpec& spec);

/// The 3x3 field minor assembled from oracle moments and evaluated by the
/// Leibniz formula, contracting the two field vectors in each term.
double oracle_minor(const JointState& joint, const SceneGeometry& scene);

}  // namespace resfluor::oracle
