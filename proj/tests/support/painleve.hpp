#pragma once
// Hastings-McLeod oracle for F2: q'' = s q + 2 q^3, q ~ Ai(s) as s -> +inf,
// F2(s) = exp(-int_s^inf (x - s) q(x)^2 dx).
#include <array>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/airy.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>

namespace oracle {

struct TwValue {
  double F2, density;
};

// Integrates from s0 down to s. State: q, q', v = int_s^inf q^2, u = int_s^inf (x - s) q^2.
// F2 = exp(-u), F2' = v F2.
inline TwValue tracy_widom(double s, double s0 = 8.0) {
  using State = std::array<double, 4>;
  using boost::math::airy_ai;
  using boost::math::airy_ai_prime;
  if (s >= s0) s0 = s + 8.0;
  boost::math::quadrature::exp_sinh<double> es;
  const double v0 = es.integrate([&](double t) { return std::pow(airy_ai(s0 + t), 2); });
  const double u0 = es.integrate([&](double t) { return t * std::pow(airy_ai(s0 + t), 2); });
  State y{airy_ai(s0), airy_ai_prime(s0), v0, u0};
  auto rhs = [](const State& x, State& dx, double t) {
    dx[0] = x[1];
    dx[1] = t * x[0] + 2 * x[0] * x[0] * x[0];
    dx[2] = -x[0] * x[0];
    dx[3] = -x[2];
  };
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_controlled(1e-24, 1e-13, ode::runge_kutta_dopri5<State>());
  ode::integrate_adaptive(stepper, rhs, y, s0, s, -1e-3);
  const double F = std::exp(-y[3]);
  return {F, y[2] * F};
}

inline double tracy_widom_f2(double s) { return tracy_widom(s).F2; }

}  // namespace oracle
