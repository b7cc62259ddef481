#include "resfluor/atom_dynamics.hpp"

#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "resfluor/error.hpp"

namespace resfluor {

namespace {

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void AtomParameters::validate() const {
  if (!finite(gamma1) || !finite(gamma2) || !finite(rabi) || !finite(detuning))
    throw Error(ErrorCode::InvalidParameters, "non-finite atom parameter");
  if (gamma1 <= 0.0) throw Error(ErrorCode::InvalidParameters, "gamma1 must be positive");
  if (gamma2 < 0.5 * gamma1)
    throw Error(ErrorCode::InvalidParameters, "gamma2 must be at least gamma1/2");
  if (rabi < 0.0) throw Error(ErrorCode::InvalidParameters, "rabi must be non-negative");
}

bool is_physical(const AtomicSteadyState& s, double slack) {
  const double c = s.coherence_sq();
  return s.sigma22 >= -slack && s.sigma22 <= 1.0 + slack &&
         c <= s.sigma22 * (1.0 - s.sigma22) + slack;
}

AtomicSteadyState steady_state(const AtomParameters& p) {
  p.validate();
  const double saturation = p.rabi * p.rabi * p.gamma2 / p.gamma1;
  const double denom = p.gamma2 * p.gamma2 + p.detuning * p.detuning + saturation;
  AtomicSteadyState s;
  s.sigma22 = 0.5 * saturation / denom;
  s.sigma21 = 0.5 * p.rabi * std::complex<double>(p.detuning, -p.gamma2) / denom;
  return s;
}

double coherence_ratio(const AtomParameters& p) {
  p.validate();
  if (p.rabi == 0.0) throw Error(ErrorCode::InvalidParameters, "ratio undefined without drive");
  const double lorentz = p.gamma2 * p.gamma2 + p.detuning * p.detuning;
  return 2.0 * p.gamma2 / p.gamma1 * (1.0 + p.rabi * p.rabi * p.gamma2 / (p.gamma1 * lorentz));
}

double rabi_for_ratio(double target_ratio, double gamma1, double gamma2, double detuning) {
  AtomParameters{gamma1, gamma2, 0.0, detuning}.validate();
  const double floor = 2.0 * gamma2 / gamma1;
  if (!(target_ratio > floor))
    throw Error(ErrorCode::UnreachableRatio, "target ratio must exceed 2*gamma2/gamma1");
  const double lorentz = gamma2 * gamma2 + detuning * detuning;
  return std::sqrt((target_ratio / floor - 1.0) * gamma1 * lorentz / gamma2);
}

AtomicSteadyState state_for_ratio(double target_ratio, double gamma2, double detuning) {
  return steady_state({1.0, gamma2, rabi_for_ratio(target_ratio, 1.0, gamma2, detuning), detuning});
}

std::optional<double> entanglement_rabi_bound(int n_atoms, double gamma1, double gamma2,
                                              double detuning) {
  if (n_atoms < 1) throw Error(ErrorCode::InvalidParameters, "n_atoms must be positive");
  AtomParameters{gamma1, gamma2, 0.0, detuning}.validate();
  const double r = gamma1 / gamma2;
  const double rhs = (0.5 * (n_atoms + 1) * r * r - r) * (gamma2 * gamma2 + detuning * detuning);
  // Equivalent to gamma2/gamma1 >= (N+1)/2, written without the division.
  if (2.0 * gamma2 >= (n_atoms + 1) * gamma1 || !(rhs > 0.0)) return std::nullopt;
  return std::sqrt(rhs);
}

std::vector<BlochSample> bloch_integrate(const AtomParameters& p, const AtomicSteadyState& initial,
                                         double horizon, double tolerance) {
  p.validate();
  if (!is_physical(initial, 1e-12))
    throw Error(ErrorCode::InvalidParameters, "initial state is not a density matrix");
  if (!(horizon >= 0.0)) throw Error(ErrorCode::InvalidParameters, "negative horizon");

  // x = (Re sigma21, Im sigma21, sigma22)
  using State = std::array<double, 3>;
  const auto rhs = [&p](const State& x, State& dx, double /*t*/) {
    const std::complex<double> s21(x[0], x[1]);
    const std::complex<double> ds21 = std::complex<double>(-p.gamma2, p.detuning) * s21 -
                                      std::complex<double>(0.0, 0.5 * p.rabi) * (1.0 - 2.0 * x[2]);
    dx[0] = ds21.real();
    dx[1] = ds21.imag();
    dx[2] = -p.gamma1 * x[2] - p.rabi * x[1];
  };

  std::vector<BlochSample> out;
  const auto observe = [&out](const State& x, double t) {
    if (!std::isfinite(x[0]) || !std::isfinite(x[1]) || !std::isfinite(x[2]) ||
        std::abs(x[2]) > 2.0 || std::hypot(x[0], x[1]) > 2.0)
      throw Error(ErrorCode::NoConvergence, "Bloch trajectory left the physical region");
    out.push_back({t, {x[2], {x[0], x[1]}}});
  };

  namespace odeint = boost::numeric::odeint;
  State x{initial.sigma21.real(), initial.sigma21.imag(), initial.sigma22};
  if (horizon == 0.0) {
    observe(x, 0.0);
    return out;
  }
  auto stepper = odeint::make_dense_output(tolerance, tolerance, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_adaptive(stepper, rhs, x, 0.0, horizon, std::min(0.01, horizon), observe);
  return out;
}

}  // namespace resfluor
