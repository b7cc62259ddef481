#include "resfluor/oracle.hpp"

#include <array>
#include <optional>

#include "resfluor/error.hpp"

namespace resfluor::oracle {

namespace {

using cplx = std::complex<double>;

SparseOp identity(std::size_t dim) {
  SparseOp id(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  id.setIdentity();
  return id;
}

SparseOp power(const SparseOp& op, int k) {
  SparseOp out = identity(static_cast<std::size_t>(op.rows()));
  for (int i = 0; i < k; ++i) out = SparseOp(out * op);
  return out;
}

// Field-minor entry: a complex coefficient, optionally times a pattern vector.
struct Entry {
  cplx coeff;
  std::optional<Vec3> vec;
};

cplx contract(const Entry& a, const Entry& b, const Entry& c) {
  std::array<const Entry*, 3> e{&a, &b, &c};
  cplx coeff = a.coeff * b.coeff * c.coeff;
  std::optional<Vec3> first;
  int vectors = 0;
  for (const Entry* x : e) {
    if (!x->vec) continue;
    ++vectors;
    if (!first) {
      first = x->vec;
    } else {
      coeff *= first->dot(*x->vec);
    }
  }
  if (vectors != 0 && vectors != 2)
    throw Error(ErrorCode::InvalidParameters, "uncontractible minor term");
  return coeff;
}

}  // namespace

JointState::JointState(const AtomicSteadyState& s, int n_atoms) : n_atoms_(n_atoms) {
  factor_ << 1.0 - s.sigma22, s.sigma12(), s.sigma21, s.sigma22;
}

std::complex<double> JointState::element(std::size_t row, std::size_t col) const {
  cplx v = 1.0;
  for (int n = 0; n < n_atoms_; ++n) v *= factor_((row >> n) & 1U, (col >> n) & 1U);
  return v;
}

Eigen::MatrixXcd JointState::dense() const {
  if (n_atoms_ > 10) throw Error(ErrorCode::TooLarge, "dense joint state limited to 10 atoms");
  const auto dim = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXcd rho(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) rho(i, j) = element(i, j);
  return rho;
}

Eigen::Matrix2cd JointState::reduced(int atom) const {
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  const std::size_t bit = std::size_t{1} << atom;
  for (std::size_t k = 0; k < dimension(); ++k) {
    if (k & bit) continue;
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) out(a, b) += element(k | (a * bit), k | (b * bit));
  }
  return out;
}

JointState build_joint_state(const AtomicSteadyState& state, int n_atoms) {
  if (n_atoms < 1) throw Error(ErrorCode::InvalidParameters, "n_atoms must be positive");
  if (n_atoms > kMaxAtoms) throw Error(ErrorCode::TooLarge, "oracle limited to 12 atoms");
  JointState joint(state, n_atoms);
  const Eigen::Matrix2cd& f = joint.factor();
  if (!f.isApprox(f.adjoint(), 1e-14))
    throw Error(ErrorCode::InvalidParameters, "single-atom factor not Hermitian");
  // The spectrum of a Kronecker product is the product of factor spectra.
  const Eigen::Vector2d eig = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd>(f).eigenvalues();
  if (eig.minCoeff() < -1e-12)
    throw Error(ErrorCode::InvalidParameters, "single-atom factor not positive semidefinite");
  if (std::abs(f.trace() - 1.0) > 1e-14)
    throw Error(ErrorCode::InvalidParameters, "single-atom factor trace differs from one");
  return joint;
}

SparseOp detector_amplitude(int n_atoms, const PhaseSums& phases, int detector) {
  if (phases.size() != static_cast<std::size_t>(n_atoms))
    throw Error(ErrorCode::InvalidParameters, "phase table does not match atom count");
  const std::size_t dim = std::size_t{1} << n_atoms;
  std::vector<Eigen::Triplet<cplx>> entries;
  entries.reserve(dim / 2 * n_atoms);
  for (int n = 0; n < n_atoms; ++n) {
    const double phi = phases.phases[n][detector];
    const cplx w(std::cos(phi), std::sin(phi));
    const std::size_t bit = std::size_t{1} << n;
    for (std::size_t k = 0; k < dim; ++k)
      if (k & bit) entries.emplace_back(static_cast<int>(k & ~bit), static_cast<int>(k), w);
  }
  SparseOp a(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

std::complex<double> oracle_moment(const JointState& joint, const PhaseSums& phases,
                                   const MomentSpec& spec) {
  spec.validate();
  const int n = joint.n_atoms();
  const SparseOp a1 = detector_amplitude(n, phases, 0);
  const SparseOp a2 = detector_amplitude(n, phases, 1);
  const SparseOp a1d = a1.adjoint();
  const SparseOp a2d = a2.adjoint();
  SparseOp op = power(a1d, spec.p);
  op = SparseOp(op * power(a2d, spec.q));
  op = SparseOp(op * power(a1, spec.r));
  op = SparseOp(op * power(a2, spec.s));

  cplx tr = 0.0;
  for (Eigen::Index col = 0; col < op.outerSize(); ++col)
    for (SparseOp::InnerIterator it(op, col); it; ++it)
      tr += it.value() * joint.element(static_cast<std::size_t>(it.col()),
                                       static_cast<std::size_t>(it.row()));
  return tr;
}

double oracle_minor(const JointState& joint, const SceneGeometry& scene) {
  const PhaseSums phases = phase_factors(scene);
  if (phases.size() != static_cast<std::size_t>(joint.n_atoms()))
    throw Error(ErrorCode::InvalidParameters, "scene does not match joint state");
  const Vec3 g1 = emission_vector(scene.detector1, scene.dipole_direction);
  const Vec3 g2 = emission_vector(scene.detector2, scene.dipole_direction);

  const auto mom = [&](int p, int q, int r, int s) {
    return oracle_moment(joint, phases, {p, q, r, s});
  };
  const cplx c1 = mom(0, 0, 1, 0);
  const cplx c2 = mom(0, 0, 0, 1);
  const std::array<std::array<Entry, 3>, 3> m{{
      {Entry{1.0, std::nullopt}, Entry{c1, g1}, Entry{c2, g2}},
      {Entry{std::conj(c1), g1}, Entry{mom(1, 0, 1, 0) * g1.dot(g1), std::nullopt},
       Entry{mom(1, 0, 0, 1) * g1.dot(g2), std::nullopt}},
      {Entry{std::conj(c2), g2}, Entry{mom(0, 1, 1, 0) * g2.dot(g1), std::nullopt},
       Entry{mom(0, 1, 0, 1) * g2.dot(g2), std::nullopt}},
  }};

  constexpr std::array<std::array<int, 3>, 6> perms{
      {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}}};
  constexpr std::array<double, 6> sign{1, 1, 1, -1, -1, -1};
  cplx det = 0.0;
  for (std::size_t k = 0; k < perms.size(); ++k)
    det += sign[k] * contract(m[0][perms[k][0]], m[1][perms[k][1]], m[2][perms[k][2]]);
  return det.real();
}

}  // namespace resfluor::oracle
