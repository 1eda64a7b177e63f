#pragma once
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lppsim.hpp"
#include "twotime.hpp"

namespace kpztt {

struct Check {
  std::string suite, what;
  double deviation = 0, tolerance = 0;
  bool pass() const { return deviation <= tolerance; }
};

struct SuiteOptions {
  Precision pr;
  ContourConfig contour;
  double tol = 0;  // overrides every tolerance when > 0
  std::vector<double> xi_grid{-2, -1, 0, 1};
  std::vector<double> eta_grid{0, 0.5};
};

namespace detail {

inline std::string fmt_point(const char* a, double x, const char* b, double y) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s=%g %s=%g", a, x, b, y);
  return buf;
}

struct Recorder {
  std::string suite;
  const SuiteOptions& o;
  std::vector<Check> out;

  void add(std::string what, double dev, double tol) {
    out.push_back({suite, std::move(what), std::isnan(dev) ? INFINITY : dev, o.tol > 0 ? o.tol : tol});
  }
};

}  // namespace detail

// contour integrals of z^k G against closed forms of A^{(k)}
inline std::vector<Check> suite_airy_contour(const SuiteOptions& o) {
  detail::Recorder r{"airy-contour", o};
  const VerticalLineRule line = vertical_rule(1.0, 1e-18, 20);
  for (double x : {-2.0, 0.0, 1.0, 3.0}) {
    const double ci = contour_integral(line, [&](cplx z) { return g_weight(x, 0, z); }).real();
    r.add(detail::fmt_point("x", x, "k", 0), std::abs(ci - airy_ai(x)), 1e-9);
    for (double eta : {0.0, 0.5}) {
      for (int sign : {1, -1}) {
        const ShiftParams p{x, eta};
        const double y = x + eta * eta;
        const AiryPair a = airy(y);
        const double e = std::exp(sign * (x * eta + 2 * eta * eta * eta / 3));
        const double d2 = ((y + eta * eta) * a.ai + 2 * sign * eta * a.aip) * e;
        r.add(detail::fmt_point("x", x, "eta", eta) + (sign > 0 ? " + k=1" : " - k=1"),
              std::abs(a_deriv(p, sign, 1, 0) - a_deriv1(p, sign, 0)), 1e-9);
        r.add(detail::fmt_point("x", x, "eta", eta) + (sign > 0 ? " + k=2" : " - k=2"),
              std::abs(a_deriv(p, sign, 2, 0) - d2), 1e-9);
      }
    }
  }
  return r.out;
}

// det(I - K) = F2(xi + eta^2)
inline std::vector<Check> suite_tw2(const SuiteOptions& o) {
  detail::Recorder r{"tw2", o};
  for (double xi : o.xi_grid)
    for (double eta : o.eta_grid) {
      const auto k = build_K(xi, eta, KernelKind::K, o.pr);
      r.add(detail::fmt_point("xi", xi, "eta", eta),
            std::abs(fredholm_det(scale(k, -1.0)) - tracy_widom_f2(xi + eta * eta, o.pr)), 1e-9);
    }
  return r.out;
}

inline std::vector<Check> suite_lemma_a0(const SuiteOptions& o) {
  detail::Recorder r{"lemma-a0", o};
  for (double xi : o.xi_grid)
    for (double eta : o.eta_grid) {
      const double s = xi + eta * eta;
      const ScalarTraces t = scalar_traces(xi, eta, o.pr);
      const F2Derivs d = f2_derivs(s, o.pr);
      r.add(detail::fmt_point("xi", xi, "eta", eta), std::abs(t.a0 - d.d1 / tracy_widom_f2(s, o.pr)), 1e-6);
    }
  return r.out;
}

inline std::vector<Check> suite_lemma_a1(const SuiteOptions& o) {
  detail::Recorder r{"lemma-a1", o};
  for (double xi : o.xi_grid) {
    const ScalarTraces t = scalar_traces(xi, 0, o.pr);
    const F2Derivs d = f2_derivs(xi, o.pr);
    r.add(detail::fmt_point("xi", xi, "eta", 0), std::abs(t.a1 + d.d2 / (2 * tracy_widom_f2(xi, o.pr))), 1e-5);
  }
  return r.out;
}

// b*(e1,e2)(xi,eta) = b(e2,e1)(xi,-eta), b*_{r,0} = b_{r,0}, a1*(xi,eta) = a1(xi,-eta), r1 even in eta
inline std::vector<Check> suite_symmetry(const SuiteOptions& o) {
  detail::Recorder r{"symmetry", o};
  for (double xi : o.xi_grid)
    for (double eta : o.eta_grid) {
      const BTable t = b_table(xi, eta, o.pr), tn = b_table(xi, -eta, o.pr);
      double flip = 0, s0 = 0;
      for (int k = 0; k <= 2; ++k)
        for (int s = 0; s <= 1; ++s)
          for (int e1 = 0; e1 <= 1; ++e1)
            for (int e2 = 0; e2 <= 1; ++e2) {
              flip = std::max(flip, std::abs(t.star(k, s, e1, e2) - tn.b(k, s, e2, e1)));
              if (s == 0) s0 = std::max(s0, std::abs(t.star(k, 0, e1, e2) - t.b(k, 0, e1, e2)));
            }
      const std::string pt = detail::fmt_point("xi", xi, "eta", eta);
      r.add(pt + " b*=b(flip)", flip, 1e-8);
      r.add(pt + " b*_{r,0}=b_{r,0}", s0, 1e-8);
      const ScalarTraces a = scalar_traces(xi, eta, o.pr), an = scalar_traces(xi, -eta, o.pr);
      r.add(pt + " a1*", std::abs(a.a1star - an.a1), 1e-8);
      r.add(pt + " r1", std::abs(a.r1 - an.r1), 1e-8);
    }
  return r.out;
}

inline std::vector<Check> suite_g_from_b(const SuiteOptions& o) {
  detail::Recorder r{"g-from-b", o};
  for (double xi : o.xi_grid)
    for (double eta : o.eta_grid) {
      const KernelContext c(xi, eta, o.pr);
      const BTable t = b_table(c);
      double dev = 0;
      for (int k = 1; k <= 2; ++k)
        for (int s = 0; s <= 1; ++s)
          for (int e1 = 0; e1 <= 1; ++e1)
            for (int e2 = 0; e2 <= 1; ++e2) dev = std::max(dev, std::abs(g_from_b(t, k, s, e1, e2) - g_direct(c, k, s, e1, e2)));
      r.add(detail::fmt_point("xi", xi, "eta", eta), dev, 1e-8);
    }
  return r.out;
}

// eta = 0: e1, e2 against the reduced one-point forms
inline std::vector<Check> suite_expansion(const SuiteOptions& o) {
  detail::Recorder r{"expansion", o};
  for (double xi1 : {-1.0, 0.0, 1.0})
    for (double xi2 : {-1.0, 0.5}) {
      const ExpansionResult e = long_time_coeffs({xi1, 0, xi2, 0}, o.pr);
      auto b0 = [&](int k) { return e.b.b(k, 0, 0, 0); };
      auto b1 = [&](int k) { return e.b.b(k, 0, 1, 0); };
      const double psi1 = xi1 - 2 * b0(1) + 2 * b1(1);
      const double psi2 = 2 * b1(1) - b0(1) + 2 * b0(2) - 2 * b1(2);
      const double a0 = f2_derivs(xi2, o.pr).d1 / tracy_widom_f2(xi2, o.pr);
      const std::string pt = detail::fmt_point("xi1", xi1, "xi2", xi2);
      r.add(pt + " e1", std::abs(e.e1 - a0 * (e.r1 * psi1 + psi2)), 1e-8);
      r.add(pt + " e2", std::abs(e.e2 - e2_reduced(e.r1, e.a1, e.b)), 1e-8);
    }
  return r.out;
}

// det(I + Q(1)) = F2(xi2 + eta2^2)
inline std::vector<Check> suite_q_at_one(const SuiteOptions& o) {
  detail::Recorder r{"q-at-one", o};
  for (double a : {0.1, 0.5, 2.0, 10.0})
    for (const auto& [x, e] : {std::pair{-1.0, 0.0}, std::pair{0.5, 0.3}}) {
      // fixed (xi2, eta2) for small alpha, short-time frame for large alpha
      const TwoTimeParams p = a < 1 ? TwoTimeParams{0.2, -0.2, x, e, a} : ShortTimeFrame{0.2, -0.2, x, e, a}.params();
      const double x2 = p.xi2, e2 = p.eta2;
      const double d = fredholm_det(assemble_Q(1.0, p, o.contour, o.pr)).real();
      r.add(detail::fmt_point("alpha", a, "xi2", x2), std::abs(d - tracy_widom_f2(x2 + e2 * e2, o.pr)), 1e-6);
    }
  return r.out;
}

inline std::vector<Check> suite_kernel_paths(const SuiteOptions& o) {
  detail::Recorder r{"kernel-paths", o};
  for (double a : {0.5, 1.0}) {
    const TwoTimeParams p{0.3, 0.4, -0.5, -0.3, a};
    const KernelSet f = assemble_factorized(p, o.contour, o.pr), d = assemble_direct(p, o.contour, o.pr);
    const Eigen::Index n = f.M1.rows(), step = std::max<Eigen::Index>(1, n / 8);
    for (int j = 0; j < 7; ++j) {
      double dev = 0;
      for (Eigen::Index i = 0; i < n; i += step)
        for (Eigen::Index k = 0; k < n; k += step) dev = std::max(dev, std::abs(f.k[j](i, k) - d.k[j](i, k)));
      r.add(detail::fmt_point("alpha", a, "k", j + 1), dev, 1e-6);
    }
  }
  return r.out;
}

// F_tt unchanged under admissible delta, r and contour offsets
inline std::vector<Check> suite_invariance(const SuiteOptions& o) {
  detail::Recorder r{"invariance", o};
  for (double a : {0.5, 2.0}) {
    const TwoTimeParams p{0.3, 0.4, -0.5, -0.3, a};
    ContourConfig base = o.contour;
    if (a < 1) base.path = KernelPath::Direct;  // offsets only enter the contour path
    const double f0 = ftt(p, base, o.pr).value;
    auto vary = [&](const char* what, double val, auto&& set) {
      ContourConfig c = base;
      set(c);
      r.add(detail::fmt_point("alpha", a, what, val), std::abs(ftt(p, c, o.pr).value - f0), 1e-6);
    };
    for (double d : {0.05, 0.2}) vary("delta", d, [&](ContourConfig& c) { c.delta = d; });
    for (double rr : {1.5, 3.0}) vary("r", rr, [&](ContourConfig& c) { c.radius = rr; });
    vary("offsets", 1, [](ContourConfig& c) {
      c.d1 = 0.2, c.ad2 = 0.4, c.d3 = 0.8, c.D1 = 0.3, c.aD2 = 0.6, c.D3 = 1.2;
    });
    vary("offsets", 2, [](ContourConfig& c) {
      c.d1 = 0.3, c.ad2 = 0.7, c.d3 = 1.3, c.D1 = 0.15, c.aD2 = 0.45, c.D3 = 0.9;
    });
  }
  return r.out;
}

inline std::vector<Check> suite_marginals(const SuiteOptions& o) {
  detail::Recorder r{"marginals", o};
  for (double a : {0.1, 0.5, 1.0}) {
    const double x = -0.5, e = 0.3;
    r.add(detail::fmt_point("alpha", a, "xi1", 8),
          std::abs(ftt({8, 0.2, x, e, a}, o.contour, o.pr).value - tracy_widom_f2(x + e * e, o.pr)), 1e-4);
    r.add(detail::fmt_point("alpha", a, "xi2", 8),
          std::abs(ftt({x, e, 8, 0.2, a}, o.contour, o.pr).value - tracy_widom_f2(x + e * e, o.pr)), 1e-4);
  }
  return r.out;
}

// largest decrease of F_tt along either threshold on a 5x5 grid, up to a 1e-9 noise floor
inline std::vector<Check> suite_monotone(const SuiteOptions& o) {
  detail::Recorder r{"monotone", o};
  const std::vector<double> g{-3, -1.5, 0, 1.5, 3};
  for (double a : {0.3, 3.0}) {
    std::vector<std::vector<double>> f(g.size(), std::vector<double>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) f[i][j] = ftt({g[i], 0, g[j], 0, a}, o.contour, o.pr).value;
    double worst = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (i + 1 < g.size()) worst = std::max(worst, f[i][j] - f[i + 1][j]);
        if (j + 1 < g.size()) worst = std::max(worst, f[i][j] - f[i][j + 1]);
        worst = std::max({worst, -f[i][j] - 1e-6, f[i][j] - 1 - 1e-6});
      }
    r.add(detail::fmt_point("alpha", a, "grid", 5), worst, 1e-9);
  }
  return r.out;
}

inline std::vector<Check> suite_small_alpha(const SuiteOptions& o) {
  detail::Recorder r{"small-alpha", o};
  std::vector<cplx> us;
  for (int k = 0; k < 6; ++k) us.push_back(std::polar(o.contour.radius, 1.0 + k));
  for (const auto& p : {TwoTimeParams{0.2, 0.3, -0.4, 0.2, 1e-3}, TwoTimeParams{0, 0, 0, 0, 1e-3}}) {
    const SmallAlphaDeviation d = small_alpha_deviation(p, us, o.contour, o.pr);
    r.add(detail::fmt_point("xi1", p.xi1, "xi2", p.xi2) + " extrapolated", d.extrapolated, 1e-6);
  }
  return r.out;
}

inline std::vector<Check> suite_long_time(const SuiteOptions& o) {
  detail::Recorder r{"long-time", o};
  for (const auto& pt : {LongTimePoint{0, 0, 0, 0}, LongTimePoint{0, 0.5, 0, -0.5}}) {
    const LongTimeFit f = long_time_fit(pt, {0.02, 0.04, 0.06, 0.08, 0.1}, o.contour, o.pr);
    const std::string s = detail::fmt_point("eta1", pt.eta1, "eta2", pt.eta2);
    r.add(s + " e1 rel", std::abs(f.e1_hat / f.e1 - 1), 1e-3);
    r.add(s + " e2 rel", std::abs(f.e2_hat / f.e2 - 1), 1e-2);
    r.add(s + " slope-3", std::abs(f.slope - 3), 0.3);
  }
  return r.out;
}

// gap(alpha) must shrink along 5, 10, 20; deviation = largest gap increase
inline std::vector<Check> suite_short_time(const SuiteOptions& o) {
  detail::Recorder r{"short-time", o};
  for (const auto& [xi, eta] : {std::pair{0.0, 0.0}, std::pair{1.0, 0.5}}) {
    std::vector<double> gaps;
    for (double a : {5.0, 10.0, 20.0}) gaps.push_back(short_time_check({0, 0, xi, eta, a}, o.contour, o.pr).gap());
    const double worst = std::max(gaps[1] - gaps[0], gaps[2] - gaps[1]);
    char buf[128];
    std::snprintf(buf, sizeof buf, "xi=%g eta=%g gaps %.3e %.3e %.3e", xi, eta, gaps[0], gaps[1], gaps[2]);
    r.add(buf, std::max(0.0, worst), 0);
  }
  return r.out;
}

// F0 nondecreasing on -5..4; total mass of F0' over [-8, 8] equal to 1
inline std::vector<Check> suite_baik_rains(const SuiteOptions& o) {
  detail::Recorder r{"baik-rains", o};
  double worst = 0, prev = baik_rains_f0(-5, o.pr);
  for (double x = -4.75; x <= 4.0 + 1e-12; x += 0.25) {
    const double f = baik_rains_f0(x, o.pr);
    worst = std::max(worst, prev - f);
    prev = f;
  }
  r.add("monotone -5..4", std::max(0.0, worst), 0);
  r.add("mass F0(8) - F0(-8)", std::abs(baik_rains_f0(8, o.pr) - baik_rains_f0(-8, o.pr) - 1), 1e-4);
  return r.out;
}

using SuiteFn = std::function<std::vector<Check>(const SuiteOptions&)>;

inline const std::map<std::string, SuiteFn>& suites() {
  static const std::map<std::string, SuiteFn> m{
      {"airy-contour", suite_airy_contour}, {"tw2", suite_tw2},
      {"lemma-a0", suite_lemma_a0},         {"lemma-a1", suite_lemma_a1},
      {"symmetry", suite_symmetry},         {"g-from-b", suite_g_from_b},
      {"expansion", suite_expansion},       {"q-at-one", suite_q_at_one},
      {"kernel-paths", suite_kernel_paths}, {"invariance", suite_invariance},
      {"marginals", suite_marginals},       {"monotone", suite_monotone},
      {"small-alpha", suite_small_alpha},   {"long-time", suite_long_time},
      {"short-time", suite_short_time},     {"baik-rains", suite_baik_rains},
  };
  return m;
}

inline std::vector<Check> run_suite(const std::string& name, const SuiteOptions& o) {
  const auto& m = suites();
  const auto it = m.find(name);
  if (it == m.end()) throw std::invalid_argument("unknown suite: " + name);
  return it->second(o);
}

}  // namespace kpztt
