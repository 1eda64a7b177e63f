#pragma once
#include <cmath>
#include <complex>
#include <numbers>

#include "quad.hpp"

namespace kpztt {

struct AiryPair {
  double ai, aip;
};

namespace detail {

inline AiryPair airy_series(double x) {
  // Ai(0), -Ai'(0)
  constexpr double c1 = 0.355028053887817239260063186004;
  constexpr double c2 = 0.258819403792806798405183560189;
  const double x3 = x * x * x;
  double f = 0, g = 0, fp = 0, gp = 0;
  double cf = 1, cg = 1;  // x^{3k}/(3k)!-type coefficients without powers
  double p = 1, pm = 0;   // x^{3k}, x^{3k-1}
  for (int k = 0; k < 60; ++k) {
    const double tf = cf * p, tg = cg * p * x;
    f += tf;
    g += tg;
    fp += 3 * k * cf * pm;
    gp += (3 * k + 1) * cg * p;
    pm = x * x * p;
    cf *= 1.0 / ((3 * k + 2) * (3 * k + 3));
    cg *= 1.0 / ((3 * k + 3) * (3 * k + 4));
    p *= x3;
    if (std::abs(tf) + std::abs(tg) < 1e-18 * (std::abs(f) + std::abs(g)) && k > 2) break;
  }
  return {c1 * f - c2 * g, c1 * fp - c2 * gp};
}

// Steepest-descent line through the saddle s = sqrt(x).
inline AiryPair airy_contour(double x) {
  static const Rule base = gauss_legendre(16, 0, 1);
  const double s = std::sqrt(x), zeta = 2.0 / 3.0 * s * s * s;
  const double T = std::sqrt(42.0 / s);
  const int panels = std::max(2, int(std::ceil(T / 0.5)));
  const double h = T / panels;
  double ia = 0, ib = 0;
  for (int p = 0; p < panels; ++p) {
    for (std::size_t i = 0; i < base.size(); ++i) {
      const double t = (p + base.x[i]) * h, w = base.w[i] * h;
      const double e = std::exp(-s * t * t), ph = t * t * t / 3;
      const double c = std::cos(ph), sn = std::sin(ph);
      ia += w * e * c;
      ib += w * e * (s * c + t * sn);
    }
  }
  const double pre = std::exp(-zeta) / std::numbers::pi;
  return {pre * ia, -pre * ib};
}

inline AiryPair airy_asymptotic(double x) {
  const double s = std::sqrt(x), zeta = 2.0 / 3.0 * x * s;
  double u = 1, su = 1, sv = 1;
  double vprev = 1;
  for (int k = 1; k < 40; ++k) {
    // u_k = u_{k-1} (6k-5)(6k-3)(6k-1) / ((2k-1) 216 k)
    u *= (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) / ((2.0 * k - 1) * 216.0 * k);
    const double v = -u * (6.0 * k + 1) / (6.0 * k - 1);
    const double t = u / std::pow(-zeta, k);
    const double tv = v / std::pow(-zeta, k);
    if (std::abs(t) > std::abs(vprev)) break;
    su += t;
    sv += tv;
    vprev = t;
    if (std::abs(t) < 1e-17) break;
  }
  const double e = std::exp(-zeta) / (2 * std::sqrt(std::numbers::pi));
  return {e * su / std::sqrt(s), -e * sv * std::sqrt(s)};
}

inline AiryPair airy_bessel(double x) {
  const double y = -x, z = 2.0 / 3.0 * y * std::sqrt(y);
  const double r3 = std::sqrt(3.0);
  const double j13 = std::cyl_bessel_j(1.0 / 3.0, z), y13 = std::cyl_neumann(1.0 / 3.0, z);
  const double j23 = std::cyl_bessel_j(2.0 / 3.0, z), y23 = std::cyl_neumann(2.0 / 3.0, z);
  const double jm13 = 0.5 * j13 - 0.5 * r3 * y13;
  const double jm23 = -0.5 * j23 - 0.5 * r3 * y23;
  return {std::sqrt(y) / 3 * (j13 + jm13), y / 3 * (j23 - jm23)};
}

}  // namespace detail

inline AiryPair airy(double x) {
  if (std::abs(x) <= 2.5) return detail::airy_series(x);
  if (x > 0) return x < 9 ? detail::airy_contour(x) : detail::airy_asymptotic(x);
  return detail::airy_bessel(x);
}

inline double airy_ai(double x) { return airy(x).ai; }
inline double airy_aip(double x) { return airy(x).aip; }

struct ShiftParams {
  double xi = 0, eta = 0;
};

// G_{xi,eta}(z)
inline cplx g_weight(double xi, double eta, cplx z) {
  return std::exp(z * z * z / 3.0 + eta * z * z - xi * z);
}
inline cplx g_weight_inv(double xi, double eta, cplx z) {
  return std::exp(-(z * z * z / 3.0 + eta * z * z - xi * z));
}

// A_{+}(v) for sign = +1, A_{-}(v) for sign = -1
inline double a_func(ShiftParams p, int sign, double v) {
  const double y = p.xi + p.eta * p.eta + v;
  return airy_ai(y) * std::exp(sign * ((p.xi + v) * p.eta + 2 * p.eta * p.eta * p.eta / 3));
}

// A^{(1)} = -dA/dv, closed form
inline double a_deriv1(ShiftParams p, int sign, double v) {
  const double y = p.xi + p.eta * p.eta + v;
  const AiryPair a = airy(y);
  return -(a.aip + sign * p.eta * a.ai) * std::exp(sign * ((p.xi + v) * p.eta + 2 * p.eta * p.eta * p.eta / 3));
}

// A^{(k)} = (-1)^k d^k A/dv^k via the z^k-weighted contour integral
inline double a_deriv(ShiftParams p, int sign, int k, double v) {
  if (k == 0) return a_func(p, sign, v);
  const double x = p.xi + v;
  if (sign > 0) {
    // |z^k G| decays like exp(-(c+eta) t^2) on the line
    const double c = std::max(1.0, 1.0 - p.eta);
    const VerticalLineRule r = vertical_rule(c, std::pow(1e-18, c / (c + p.eta)), 20);
    return contour_integral(r, [&](cplx z) { return std::pow(z, k) * g_weight(x, p.eta, z); }).real();
  }
  const double d = std::max(1.0, 1.0 + p.eta);
  const VerticalLineRule r = vertical_rule(-d, std::pow(1e-18, d / (d - p.eta)), 20);
  const double s = (k % 2) ? -1.0 : 1.0;
  return s * contour_integral(r, [&](cplx z) { return std::pow(z, k) * g_weight_inv(x, p.eta, z); }).real();
}

// f^{(-k)}(v) = int_0^inf lambda^{k-1}/(k-1)! f(v+lambda) d lambda
template <class F>
double antideriv(F&& f, int k, double v, const Rule& r) {
  double fact = 1;
  for (int j = 2; j < k; ++j) fact *= j;
  double s = 0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * std::pow(r.x[i], k - 1) / fact * f(v + r.x[i]);
  return s;
}

}  // namespace kpztt
