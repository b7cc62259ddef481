#include "resfluor/ion_trap.hpp"

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "resfluor/error.hpp"

namespace resfluor {

namespace {

using Real = long double;
using RVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using RMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

RVec forces(const RVec& u) {
  const Eigen::Index n = u.size();
  RVec f(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    Real acc = u[m];
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == m) continue;
      const Real d = u[m] - u[k];
      acc -= (d > 0 ? 1 : -1) / (d * d);
    }
    f[m] = acc;
  }
  return f;
}

RMat jacobian(const RVec& u) {
  const Eigen::Index n = u.size();
  RMat j = RMat::Identity(n, n);
  for (Eigen::Index m = 0; m < n; ++m)
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == m) continue;
      const Real d = std::abs(u[m] - u[k]);
      const Real c = 2 / (d * d * d);
      j(m, k) = -c;
      j(m, m) += c;
    }
  return j;
}

bool increasing(const RVec& u) {
  for (Eigen::Index i = 1; i < u.size(); ++i)
    if (!(u[i] > u[i - 1])) return false;
  return true;
}

}  // namespace

double force_residual(std::span<const double> u) {
  RVec v(static_cast<Eigen::Index>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i) v[static_cast<Eigen::Index>(i)] = u[i];
  return static_cast<double>(forces(v).cwiseAbs().maxCoeff());
}

std::vector<double> equilibrium_positions(int n_ions) {
  if (n_ions < 1 || n_ions > 64)
    throw Error(ErrorCode::InvalidParameters, "ion count must be in [1, 64]");
  if (n_ions == 1) return {0.0};

  const Eigen::Index n = n_ions;
  // Uniform start with roughly the central spacing of a long Coulomb chain.
  const Real spacing = 2 / std::pow(static_cast<Real>(n), Real(0.56));
  RVec u(n);
  for (Eigen::Index i = 0; i < n; ++i) u[i] = spacing * (i - Real(n - 1) / 2);

  constexpr int kMaxIterations = 200;
  RVec f = forces(u);
  Real norm = f.norm();
  for (int it = 0; it < kMaxIterations && norm > 1e-16L; ++it) {
    const RVec step = jacobian(u).ldlt().solve(f);
    Real damping = 1;
    bool accepted = false;
    for (int k = 0; k < 60; ++k, damping /= 2) {
      RVec trial = u - damping * step;
      if (!increasing(trial)) continue;
      RVec ft = forces(trial);
      const Real nt = ft.norm();
      if (nt < norm || nt <= 1e-16L) {
        u = std::move(trial);
        f = std::move(ft);
        norm = nt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }

  std::vector<double> out(n_ions);
  for (Eigen::Index i = 0; i < n; ++i)
    out[i] = static_cast<double>((u[i] - u[n - 1 - i]) / 2);
  if (!(force_residual(out) < 1e-12))
    throw Error(ErrorCode::NoConvergence, "Coulomb chain equilibrium did not converge");
  return out;
}

PositionUncertainty position_uncertainty(double gamma_lambda, const IonSpecies& s) {
  if (!(gamma_lambda > 0.0) || !(s.mass_kg > 0.0) || !(s.charge_c > 0.0) || !(s.wavelength_m > 0.0))
    throw Error(ErrorCode::InvalidParameters, "trap scale, mass, charge and wavelength must be positive");
  const double gamma_m = gamma_lambda * s.wavelength_m;
  const double dz = std::pow(si::four_pi_eps0 * si::hbar * si::hbar * gamma_m * gamma_m * gamma_m /
                                 (s.mass_kg * s.charge_c * s.charge_c),
                             0.25);
  return {dz, dz / s.wavelength_m};
}

double max_scale(const IonSpecies& species, double jitter_cap_lambda) {
  if (!(jitter_cap_lambda > 0.0))
    throw Error(ErrorCode::InvalidParameters, "jitter cap must be positive");
  const double at_one = position_uncertainty(1.0, species).lambda;
  return std::pow(jitter_cap_lambda / at_one, 4.0 / 3.0);
}

std::vector<Vec3> IonChain::ideal_positions() const {
  std::vector<Vec3> out;
  out.reserve(positions.size());
  for (double u : positions) out.emplace_back(0.0, 0.0, scale_lambda * u);
  return out;
}

IonChain make_chain(int n_ions, double scale_lambda, const IonSpecies& species) {
  IonChain chain;
  chain.count = n_ions;
  chain.scale_lambda = scale_lambda;
  chain.positions = equilibrium_positions(n_ions);
  chain.species = species;
  const auto dz = position_uncertainty(scale_lambda, species);
  chain.delta_z_m = dz.meters;
  chain.delta_z_lambda = dz.lambda;
  return chain;
}

std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t sample_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(sample_index),
                    static_cast<std::uint32_t>(sample_index >> 32)};
  return std::mt19937_64(seq);
}

std::vector<Vec3> sample_jittered_positions(const IonChain& chain, JitterDistribution distribution,
                                            std::uint64_t seed, std::uint64_t sample_index) {
  std::vector<Vec3> out = chain.ideal_positions();
  const double dz = chain.delta_z_lambda;
  if (dz == 0.0) return out;

  auto rng = sample_stream(seed, sample_index);
  if (distribution == JitterDistribution::Uniform) {
    std::uniform_real_distribution<double> jitter(-dz, dz);
    for (auto& r : out) r.z() += jitter(rng);
  } else {
    std::normal_distribution<double> jitter(0.0, dz / 2.0);
    for (auto& r : out) {
      double d;
      do {
        d = jitter(rng);
      } while (std::abs(d) > dz);
      r.z() += d;
    }
  }
  return out;
}

}  // namespace resfluor
