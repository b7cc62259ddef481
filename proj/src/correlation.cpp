#include "resfluor/correlation.hpp"

#include <vector>

#include "resfluor/error.hpp"

namespace resfluor {

namespace {

using cplx = std::complex<double>;

cplx phasor(double phi) { return {std::cos(phi), std::sin(phi)}; }

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

void MomentSpec::validate() const {
  if (p < 0 || q < 0 || r < 0 || s < 0)
    throw Error(ErrorCode::InvalidParameters, "moment powers must be non-negative");
  if (order() < 1) throw Error(ErrorCode::InvalidParameters, "moment order must be at least 1");
}

bool order_overflow(const MomentSpec& spec, std::size_t n_atoms) {
  return static_cast<std::size_t>(spec.p + spec.q) > n_atoms ||
         static_cast<std::size_t>(spec.r + spec.s) > n_atoms;
}

std::complex<double> moment(const PhaseSums& phases, const AtomicSteadyState& state,
                            const MomentSpec& spec) {
  spec.validate();
  if (order_overflow(spec, phases.size())) return {0.0, 0.0};

  // Each atom carries at most one raising and one lowering flip, since
  // |1><2|^2 = 0. The DP state counts how many factors of each of the four
  // amplitude powers have been assigned to atoms so far.
  const int dp = spec.p + 1, dq = spec.q + 1, dr = spec.r + 1, ds = spec.s + 1;
  const auto index = [&](int a, int b, int c, int d) { return ((a * dq + b) * dr + c) * ds + d; };
  std::vector<cplx> cur(static_cast<std::size_t>(dp) * dq * dr * ds, 0.0);
  std::vector<cplx> next(cur.size());
  cur[index(0, 0, 0, 0)] = 1.0;

  const cplx s12 = state.sigma12();
  const cplx s21 = state.sigma21;
  const double s22 = state.sigma22;

  for (const auto& phi : phases.phases) {
    const cplx e1 = phasor(phi[0]);
    const cplx e2 = phasor(phi[1]);
    // Raising choices: none, from A1^dag, from A2^dag; lowering: none, A1, A2.
    const std::array<cplx, 3> up{1.0, std::conj(e1), std::conj(e2)};
    const std::array<cplx, 3> down{1.0, e1, e2};

    std::fill(next.begin(), next.end(), cplx{0.0, 0.0});
    for (int a = 0; a < dp; ++a)
      for (int b = 0; b < dq; ++b)
        for (int c = 0; c < dr; ++c)
          for (int d = 0; d < ds; ++d) {
            const cplx w = cur[index(a, b, c, d)];
            if (w == cplx{0.0, 0.0}) continue;
            for (int u = 0; u < 3; ++u) {
              const int na = a + (u == 1), nb = b + (u == 2);
              if (na >= dp || nb >= dq) continue;
              for (int l = 0; l < 3; ++l) {
                const int nc = c + (l == 1), nd = d + (l == 2);
                if (nc >= dr || nd >= ds) continue;
                cplx atom;
                if (u == 0 && l == 0) atom = 1.0;
                else if (u == 0) atom = s21;
                else if (l == 0) atom = s12;
                else atom = s22;
                next[index(na, nb, nc, nd)] += w * atom * up[u] * down[l];
              }
            }
          }
    std::swap(cur, next);
  }
  const double multiplicity =
      factorial(spec.p) * factorial(spec.q) * factorial(spec.r) * factorial(spec.s);
  return multiplicity * cur[index(spec.p, spec.q, spec.r, spec.s)];
}

CovarianceTable covariance_table(const PhaseSums& phases, const AtomicSteadyState& state) {
  CovarianceTable t{};
  const double beta = state.incoherent();
  const double coh = state.coherence_sq();
  const cplx s21 = state.sigma21;

  // Single-atom sums: sum_n exp(i(phi_j - phi_i)) and sum_n exp(2 i phi_j).
  std::array<std::array<cplx, 2>, 2> diag{};
  std::array<cplx, 2> doubled{};
  for (const auto& phi : phases.phases)
    for (int i = 0; i < 2; ++i) {
      doubled[i] += phasor(2.0 * phi[i]);
      for (int j = 0; j < 2; ++j) diag[i][j] += phasor(phi[j] - phi[i]);
    }

  for (int j = 0; j < 2; ++j) {
    const cplx sj = phases.sum(j);
    t.mean[j] = s21 * sj;
    t.anomalous[j] = s21 * s21 * (sj * sj - doubled[j]);
    t.centered_anomalous[j] = -s21 * s21 * doubled[j];
    for (int i = 0; i < 2; ++i) {
      t.second[i][j] = beta * diag[i][j] + coh * std::conj(phases.sum(i)) * sj;
      t.centered[i][j] = beta * diag[i][j];
    }
  }
  return t;
}

}  // namespace resfluor
