#pragma once
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace kpztt {

using cplx = std::complex<double>;

struct Rule {
  std::vector<double> x, w;
  std::size_t size() const { return x.size(); }
};

struct HalfLineRule : Rule {
  double L = 0;
};

// complex contour rule: the weights already contain dz but not 1/(2 pi i)
struct ContourRule {
  std::vector<cplx> z, w;
  std::size_t size() const { return z.size(); }
};

struct VerticalLineRule : ContourRule {
  double anchor = 0, halfwidth = 0;
};

struct CircleRule {
  double radius = 2;
  std::vector<cplx> u;
  // (1/2 pi i) du at each node
  std::vector<cplx> w;
  std::size_t size() const { return u.size(); }
};

namespace detail {
// P_n(t) and P_n'(t)
inline std::pair<double, double> legendre(int n, double t) {
  double p0 = 1, p1 = t;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  if (n == 1) p0 = 1;
  return {p1, n * (t * p1 - p0) / (t * t - 1)};
}
}  // namespace detail

// Newton on the three-term recurrence; nodes ascending.
inline Rule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  if (!(a < b)) throw std::invalid_argument("gauss_legendre: need a < b");
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  if (n == 1) {
    r.x[0] = 0.5 * (a + b);
    r.w[0] = b - a;
    return r;
  }
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = detail::legendre(n, t);
      double dt = p / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    double dp = detail::legendre(n, t).second;
    double wt = 2 / ((1 - t * t) * dp * dp);
    r.x[i] = -t;
    r.x[n - 1 - i] = t;
    r.w[i] = r.w[n - 1 - i] = wt;
  }
  if (n % 2 == 1) r.x[n / 2] = 0;
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    r.x[i] = c + h * r.x[i];
    r.w[i] *= h;
  }
  return r;
}

inline Rule composite(const std::vector<double>& breaks, int per_panel) {
  Rule out;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    Rule p = gauss_legendre(per_panel, breaks[k], breaks[k + 1]);
    out.x.insert(out.x.end(), p.x.begin(), p.x.end());
    out.w.insert(out.w.end(), p.w.begin(), p.w.end());
  }
  return out;
}

inline std::vector<double> normalize_breaks(std::vector<double> b, double min_gap = 0.25) {
  std::sort(b.begin(), b.end());
  std::vector<double> out;
  for (double v : b) {
    if (out.empty() || v - out.back() > min_gap) out.push_back(v);
    else if (v > out.back()) out.back() = v;
  }
  return out;
}

// L = decay_hint + 14, panels [0,2],[2,6],[6,L]; n is the total node count.
inline HalfLineRule half_line_rule(int n, double decay_hint = 2.0) {
  if (n < 4) throw std::invalid_argument("half_line_rule: n must be >= 4");
  if (!(decay_hint >= 0)) throw std::invalid_argument("half_line_rule: decay_hint must be >= 0");
  const double L = decay_hint + 14;
  HalfLineRule r;
  static_cast<Rule&>(r) = composite(normalize_breaks({0, 2, 6, L}), (n + 2) / 3);
  r.L = L;
  return r;
}

// Half-line rule resolving both unit scale and scale s (s >= 1): breaks {0,2,6,L} and s*{2,6,L}.
inline HalfLineRule multiscale_rule(int per_panel, double decay_hint, double s) {
  const double L = decay_hint + 14;
  std::vector<double> b{0, 2, 6, L};
  if (s > 1.5) {
    for (double v : {2.0, 6.0, L}) b.push_back(s * v);
  } else {
    b.back() = s * L;
  }
  HalfLineRule r;
  b = normalize_breaks(b);
  static_cast<Rule&>(r) = composite(b, per_panel);
  r.L = b.back();
  return r;
}

inline CircleRule circle_rule(double r, int m) {
  if (!(r > 1)) throw std::invalid_argument("circle_rule: radius must exceed 1");
  if (m < 8 || m % 2) throw std::invalid_argument("circle_rule: m must be even and >= 8");
  CircleRule c;
  c.radius = r;
  c.u.resize(m);
  c.w.resize(m);
  for (int k = 0; k < m; ++k) {
    double th = 2 * std::numbers::pi * k / m;
    c.u[k] = std::polar(r, th);
    // du = i u dtheta, divided by 2 pi i
    c.w[k] = c.u[k] / double(m);
  }
  return c;
}

// Line c + i t, |t| <= T with exp(-|c| T^2) = floor; composite GL with panels of width <= 0.5.
inline VerticalLineRule vertical_rule(double c, double floor = 1e-16, int per_panel = 20) {
  if (c == 0) throw std::invalid_argument("vertical_rule: anchor must be nonzero");
  if (!(floor > 0 && floor <= 1e-6)) throw std::invalid_argument("vertical_rule: floor must be in (0,1e-6]");
  const double T = std::sqrt(-std::log(floor) / std::abs(c));
  const int panels = std::max(2, int(std::ceil(2 * T / 0.5)));
  std::vector<double> b(panels + 1);
  for (int k = 0; k <= panels; ++k) b[k] = -T + 2 * T * k / panels;
  Rule g = composite(b, per_panel);
  VerticalLineRule v;
  v.anchor = c;
  v.halfwidth = T;
  v.z.resize(g.size());
  v.w.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    v.z[i] = cplx(c, g.x[i]);
    v.w[i] = cplx(0, g.w[i]);
  }
  return v;
}

// Wedge through x0 with rays at angles +-angle, oriented upward (angle < pi/2 opens right).
// Rays truncated at length S.
inline ContourRule wedge_rule(double x0, double angle, double S = 7.0, int n = 60) {
  if (!(angle > 0 && angle < std::numbers::pi)) throw std::invalid_argument("wedge_rule: angle must lie in (0, pi)");
  Rule g = gauss_legendre(n, 0, S);
  const cplx eu = std::polar(1.0, angle), el = std::polar(1.0, -angle);
  ContourRule r;
  r.z.reserve(2 * n);
  r.w.reserve(2 * n);
  for (int i = 0; i < n; ++i) {
    r.z.push_back(x0 + g.x[i] * el);
    r.w.push_back(-el * g.w[i]);
  }
  for (int i = 0; i < n; ++i) {
    r.z.push_back(x0 + g.x[i] * eu);
    r.w.push_back(eu * g.w[i]);
  }
  return r;
}

template <class F>
auto integrate(const Rule& r, F&& f) {
  decltype(f(0.0)) s{};
  for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * f(r.x[i]);
  return s;
}

// (1/2 pi i) times the contour integral
template <class F>
cplx contour_integral(const ContourRule& r, F&& f) {
  cplx s = 0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * f(r.z[i]);
  return s / cplx(0, 2 * std::numbers::pi);
}

template <class F>
cplx circle_integral(const CircleRule& c, F&& f) {
  cplx s = 0;
  for (std::size_t k = 0; k < c.size(); ++k) s += c.w[k] * f(c.u[k]);
  return s;
}

}  // namespace kpztt
