#pragma once
#include <cmath>
#include <limits>
#include <stdexcept>

#include "airy.hpp"
#include "opcalc.hpp"

namespace kpztt {

struct Precision {
  int nodes = 48;
  double h = 1e-3;  // differentiation step
};

inline double decay_hint(double shift) { return std::max(0.0, -shift) + 2.0; }

enum class KernelKind { K, Kstar, K0 };

// A_{+}, A_{-} on the nodes, the Hankel operators and K = A_+ A_-.
struct KernelContext {
  double xi = 0, eta = 0;
  RulePtr rule;
  HalfLineVector ap, am;
  DiscreteOperator<double> hp, hm, k;

  KernelContext(double xi_, double eta_, const Precision& pr = {})
      : xi(xi_), eta(eta_), rule(share(half_line_rule(pr.nodes, decay_hint(xi_ + eta_ * eta_)))) {
    const auto& x = rule->x;
    const Eigen::Index n = x.size();
    const double c = xi + eta * eta, e3 = 2 * eta * eta * eta / 3;
    const auto sw = sqrt_weights(*rule);
    Mat<double> p(n, n), m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const double v = x[i] + x[j], a = airy_ai(c + v), t = (xi + v) * eta + e3;
        p(i, j) = sw[i] * a * std::exp(t) * sw[j];
        m(i, j) = sw[i] * a * std::exp(-t) * sw[j];
      }
    hp = {rule, p, "A+"};
    hm = {rule, m, "A-"};
    k = {rule, p * m, "K"};
    ap = sample(rule, [&](double v) { return a_func({xi, eta}, +1, v); });
    am = sample(rule, [&](double v) { return a_func({xi, eta}, -1, v); });
  }

  HalfLineVector ones() const { return sample(rule, [](double) { return 1.0; }); }
  HalfLineVector power(int s) const {
    double f = 1;
    for (int j = 2; j <= s; ++j) f *= j;
    return sample(rule, [&](double v) { return std::pow(v, s) / f; });
  }
};

inline DiscreteOperator<double> build_K(double xi, double eta, KernelKind kind, const Precision& pr = {}) {
  KernelContext c(xi, eta, pr);
  if (kind == KernelKind::Kstar) return {c.rule, c.k.m.transpose(), "K*"};
  c.k.tag = kind == KernelKind::K0 ? "K0" : "K";
  return c.k;
}

// F_2(s) = det(I - K_Ai,s) = det(I - A) det(I + A) with A the Hankel operator of Ai(s + .)
inline double tracy_widom_f2(double s, const Precision& pr = {}) {
  RulePtr rule = share(half_line_rule(pr.nodes, decay_hint(s)));
  auto a = hankel_op(rule, [&](double v) { return airy_ai(s + v); });
  const Eigen::Index n = a.n();
  const Mat<double> id = Mat<double>::Identity(n, n);
  return (id - a.m).determinant() * (id + a.m).determinant();
}

struct F2Derivs {
  double d1 = 0, d2 = 0, err = 0;
};

// Richardson-extrapolated central differences with steps h, h/2.
template <class F>
F2Derivs richardson_derivs(F&& f, double s, double h) {
  auto d1 = [&](double hh) { return (f(s + hh) - f(s - hh)) / (2 * hh); };
  const double f0 = f(s);
  auto d2 = [&](double hh) { return (f(s + hh) - 2 * f0 + f(s - hh)) / (hh * hh); };
  const double a = d1(h), b = d1(h / 2), c = d2(h), d = d2(h / 2);
  F2Derivs r{(4 * b - a) / 3, (4 * d - c) / 3, 0};
  r.err = std::max(std::abs(b - a) / 3, std::abs(d - c) / 3 * h);
  return r;
}

template <class F>
double richardson_d1(F&& f, double s, double h, double* err = nullptr) {
  auto d1 = [&](double hh) { return (f(s + hh) - f(s - hh)) / (2 * hh); };
  const double a = d1(h), b = d1(h / 2);
  if (err) *err = std::abs(b - a) / 3;
  return (4 * b - a) / 3;
}

inline F2Derivs f2_derivs(double s, const Precision& pr = {}) {
  F2Derivs r = richardson_derivs([&](double x) { return tracy_widom_f2(x, pr); }, s, pr.h);
  if (r.err > 1e-6) throw std::runtime_error("f2_derivs: extrapolation disagreement");
  return r;
}

// b_{r,s}(e1,e2) and b*_{r,s}(e1,e2) for r = 0..2, s = 0..1.
struct BTable {
  double xi = 0, eta = 0;
  double v[3][2][2][2][2] = {};

  double b(int r, int s, int e1, int e2) const { return v[r][s][e1][e2][0]; }
  double star(int r, int s, int e1, int e2) const { return v[r][s][e1][e2][1]; }
  double& at(int r, int s, int e1, int e2, bool starred) { return v[r][s][e1][e2][starred]; }
};

inline BTable b_table(const KernelContext& c) {
  BTable t;
  t.xi = c.xi;
  t.eta = c.eta;
  const Resolvent res(c.k);
  const Resolvent rest(transpose(c.k));
  const Eigen::VectorXd one = c.ones().folded();
  for (int s = 0; s <= 1; ++s) {
    const Eigen::VectorXd f = c.power(s).folded();
    const Eigen::VectorXd am1 = kminus(c.hm, 1).folded(), ap1 = kminus(c.hp, 1).folded();
    const Eigen::VectorXd ams = kminus(c.hm, 1 + s).folded(), aps = kminus(c.hp, 1 + s).folded();
    const Eigen::VectorXd kf = c.hp.m * ams;   // K f_s
    const Eigen::VectorXd k1 = c.hp.m * am1;   // K 1
    for (int r = 0; r <= 2; ++r) {
      t.at(r, s, 1, 1, false) = am1.dot(res.apply_folded(aps, r));
      t.at(r, s, 0, 1, false) = one.dot(res.apply_folded(aps, r));
      t.at(r, s, 1, 0, false) = rest.apply_folded(am1, r).dot(f);
      t.at(r, s, 0, 0, false) = one.dot(res.apply_folded(kf, r));
      t.at(r, s, 1, 1, true) = ams.dot(res.apply_folded(ap1, r));
      t.at(r, s, 0, 1, true) = f.dot(res.apply_folded(ap1, r));
      t.at(r, s, 1, 0, true) = rest.apply_folded(ams, r).dot(one);
      t.at(r, s, 0, 0, true) = f.dot(res.apply_folded(k1, r));
    }
  }
  return t;
}

inline BTable b_table(double xi, double eta, const Precision& pr = {}) { return b_table(KernelContext(xi, eta, pr)); }

struct ScalarTraces {
  double r1 = 0, a0 = 0, a1 = 0, a1star = 0;
};

// r1 at (xi,eta) as the K_1 point; a0, a1, a1* at (xi,eta) as the K_2 point
inline ScalarTraces scalar_traces(const KernelContext& c) {
  ScalarTraces s;
  const Resolvent res(c.k);
  s.r1 = trace(res.apply(c.k, 1));
  const Resolvent rest(transpose(c.k));
  const auto am1 = sample(c.rule, [&](double v) { return a_deriv1({c.xi, c.eta}, -1, v); });
  const auto ap1 = sample(c.rule, [&](double v) { return a_deriv1({c.xi, c.eta}, +1, v); });
  const auto l_am = rest.apply(c.am, 1);
  s.a0 = inner(c.ap, l_am);
  s.a1 = inner(c.ap, rest.apply(am1, 1));
  s.a1star = inner(ap1, l_am);
  return s;
}

inline ScalarTraces scalar_traces(double xi, double eta, const Precision& pr = {}) {
  return scalar_traces(KernelContext(xi, eta, pr));
}

inline double binom(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// g_{r,s} from the b-table
inline double g_from_b(const BTable& t, int r, int s, int e1, int e2, bool starred = false) {
  if (r < 1) throw std::invalid_argument("g_from_b: r must be >= 1");
  auto b = [&](int k) { return starred ? t.star(k, s, e1, e2) : t.b(k, s, e1, e2); };
  double g = 0;
  if (e1 == 0 && e2 == 0) {
    for (int k = 1; k <= r; ++k) g += ((r - k) % 2 ? -1 : 1) * binom(r - 1, k - 1) * b(k);
  } else {
    for (int k = 0; k <= r; ++k) g += ((r - k) % 2 ? -1 : 1) * binom(r, k) * b(k);
  }
  return g;
}

// tr (I-K)^{-r} K^{r-1} (K A_+^{e2})^{(-1-s)} (x) (A_-^{e1})^{(-1)}
inline double g_direct(const KernelContext& c, int r, int s, int e1, int e2) {
  const Resolvent res(c.k);
  DiscreteOperator<double> op = e2 ? compose(c.k, c.hp) : c.k;
  Eigen::VectorXd left = kminus(op, 1 + s).folded();
  for (int i = 1; i < r; ++i) left = c.k.m * left;
  left = res.apply_folded(left, r);
  const Eigen::VectorXd right = e1 ? kminus(c.hm, 1).folded() : c.ones().folded();
  return left.dot(right);
}

struct LongTimePoint {
  double xi1 = 0, eta1 = 0, xi2 = 0, eta2 = 0;
};

struct ExpansionResult {
  double e1 = 0, e2 = 0;
  double e2_printed = 0;
  double e2_spec_printed = std::numeric_limits<double>::quiet_NaN();
  double r1 = 0, a0 = 0, a1 = 0, a1_minus = 0, a1star = 0;
  double psi1 = 0, psi2 = 0;
  // brackets multiplying a1(xi2, eta2) and a1(xi2, -eta2)
  double phi1_minus = 0, phi1_plus = 0, phi2_minus = 0, phi2_plus = 0;
  // printed phi_1, phi_2 at (xi1, eta1) and (xi1, -eta1)
  double phi1_printed = 0, phi1_printed_neg = 0, phi2_printed = 0, phi2_printed_neg = 0;
  BTable b, b_neg;
};

inline void psi_terms(const BTable& t, double& psi1, double& psi2) {
  auto B = [&](int r, int e1, int e2) { return t.b(r, 0, e1, e2); };
  psi1 = t.xi - B(1, 1, 1) - B(1, 0, 0) + B(1, 1, 0) + B(1, 0, 1);
  psi2 = B(1, 1, 0) + B(1, 0, 1) - B(1, 0, 0) + B(2, 1, 1) + B(2, 0, 0) - B(2, 1, 0) - B(2, 0, 1);
}

inline void phi_printed(const BTable& t, double& phi1, double& phi2) {
  auto B = [&](int r, int s, int e1, int e2) { return t.b(r, s, e1, e2); };
  const double x = t.xi;
  phi1 = -B(1, 1, 1, 1) - B(1, 1, 1, 0) + B(1, 1, 0, 0) - B(0, 1, 1, 0) + B(0, 1, 0, 1) +
         x * (B(1, 0, 0, 1) - B(1, 0, 1, 1)) + x * x / 2 - t.eta;
  phi2 = B(2, 1, 1, 1) + B(2, 1, 1, 0) - B(2, 1, 0, 1) - B(2, 1, 0, 0) - B(1, 1, 1, 0) + B(1, 1, 0, 1) +
         B(1, 1, 0, 0) - B(0, 1, 1, 0) - B(0, 1, 0, 1) + x * (B(2, 0, 1, 1) - B(2, 0, 0, 1) + B(1, 0, 0, 1));
}

// Second-order brackets; B = b-table, S = starred table, both at (xi1, eta1).
inline void phi_brackets(const BTable& t, ExpansionResult& e) {
  auto B = [&](int r, int s, int e1, int e2) { return t.b(r, s, e1, e2); };
  auto S = [&](int r, int s, int e1, int e2) { return t.star(r, s, e1, e2); };
  const double x = t.xi, h = t.eta;
  e.phi1_minus = -S(1, 1, 1, 1) - S(1, 1, 0, 1) + S(1, 1, 0, 0) + B(1, 1, 1, 0) + x * (B(1, 0, 1, 0) - B(1, 0, 1, 1)) +
                 x * x / 2 + h;
  e.phi1_plus = -B(1, 1, 1, 1) - B(1, 1, 1, 0) + B(1, 1, 0, 1) + B(1, 1, 0, 0) + x * (B(1, 0, 0, 1) - B(1, 0, 1, 1)) +
                x * x / 2 - h;
  e.phi2_minus = S(2, 1, 1, 1) + S(1, 1, 1, 0) - S(2, 1, 1, 0) - B(1, 1, 0, 1) + S(2, 1, 0, 1) + S(1, 1, 0, 0) -
                 S(2, 1, 0, 0) + x * (B(2, 0, 1, 1) + B(1, 0, 1, 0) - B(2, 0, 1, 0));
  e.phi2_plus = B(2, 1, 1, 1) - B(1, 1, 1, 0) + B(2, 1, 1, 0) + B(1, 1, 0, 1) - B(2, 1, 0, 1) + B(1, 1, 0, 0) -
                B(2, 1, 0, 0) + x * (B(2, 0, 1, 1) + B(1, 0, 0, 1) - B(2, 0, 0, 1));
}

inline ExpansionResult long_time_coeffs(const LongTimePoint& p, const Precision& pr = {}) {
  ExpansionResult e;
  const KernelContext c1(p.xi1, p.eta1, pr);
  e.b = b_table(c1);
  e.b_neg = p.eta1 == 0 ? e.b : b_table(p.xi1, -p.eta1, pr);
  e.r1 = scalar_traces(c1).r1;
  const ScalarTraces s2 = scalar_traces(p.xi2, p.eta2, pr);
  e.a0 = s2.a0;
  e.a1 = s2.a1;
  e.a1star = s2.a1star;
  e.a1_minus = p.eta2 == 0 ? s2.a1 : scalar_traces(p.xi2, -p.eta2, pr).a1;

  psi_terms(e.b, e.psi1, e.psi2);
  e.e1 = e.a0 * (e.r1 * e.psi1 + e.psi2);

  phi_brackets(e.b, e);
  e.e2 = e.r1 * (e.a1 * e.phi1_minus + e.a1_minus * e.phi1_plus) + e.a1 * e.phi2_minus + e.a1_minus * e.phi2_plus;

  phi_printed(e.b, e.phi1_printed, e.phi2_printed);
  phi_printed(e.b_neg, e.phi1_printed_neg, e.phi2_printed_neg);
  e.e2_printed = e.r1 * (e.a1 * e.phi1_printed_neg + e.a1_minus * e.phi1_printed) + e.a1 * e.phi2_printed_neg +
                 e.a1_minus * e.phi2_printed;
  if (p.eta1 == 0 && p.eta2 == 0) {
    const double x = p.xi1;
    auto b0 = [&](int r, int s) { return e.b.b(r, s, 0, 0); };
    auto b1 = [&](int r, int s) { return e.b.b(r, s, 1, 0); };
    const double f1 = -b1(1, 1) + x * (b1(1, 0) - b0(1, 0)) + x * x / 2;
    const double f2 = -b0(1, 1) + x * (b1(1, 0) + b0(2, 0) - b1(2, 0));
    e.e2_spec_printed = 2 * e.a1 * (e.r1 * f1 + f2);
  }
  return e;
}

// eta1 = eta2 = 0 reduction of the second-order coefficient
inline double e2_reduced(double r1, double a1, const BTable& t) {
  const double x = t.xi;
  auto b0 = [&](int r, int s) { return t.b(r, s, 0, 0); };
  auto b1 = [&](int r, int s) { return t.b(r, s, 1, 0); };
  return 2 * a1 * (r1 * (x * (b1(1, 0) - b0(1, 0)) + x * x / 2) + b0(1, 1) + x * (b1(1, 0) + b0(2, 0) - b1(2, 0)));
}

struct ShortTimeResult {
  double xi = 0, eta = 0, psi = 0;
  bool f0_density_available = false;
  BTable b;
};

inline ShortTimeResult short_time_psi(double xi, double eta, const Precision& pr = {}) {
  ShortTimeResult r;
  r.xi = xi;
  r.eta = eta;
  r.b = b_table(xi, eta, pr);
  auto B = [&](int e1, int e2) { return r.b.b(1, 0, e1, e2); };
  r.psi = xi + B(0, 1) + B(1, 0) - B(0, 0) - B(1, 1);
  r.f0_density_available = eta == 0;
  return r;
}

// F_0(xi) = d/dxi [F_2(xi) psi(xi, 0)]
// Returns 0 where F2(xi + 2h) < 1e-14: F2 psi is below that level and I - K is numerically singular.
inline double baik_rains_f0(double xi, const Precision& pr = {}, double* err = nullptr) {
  if (tracy_widom_f2(xi + 2 * pr.h, pr) < 1e-14) {
    if (err) *err = 0;
    return 0;
  }
  auto g = [&](double x) { return tracy_widom_f2(x, pr) * short_time_psi(x, 0, pr).psi; };
  double e = 0;
  const double v = richardson_d1(g, xi, pr.h, &e);
  if (err) *err = e;
  if (e > 1e-5) throw std::runtime_error("baik_rains_f0: extrapolation disagreement");
  return v;
}

}  // namespace kpztt
