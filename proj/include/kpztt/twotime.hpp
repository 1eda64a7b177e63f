#pragma once
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "coeffs.hpp"
#include "parallel.hpp"

namespace kpztt {

struct TwoTimeParams {
  double xi1 = 0, eta1 = 0, xi2 = 0, eta2 = 0, alpha = 0.1;

  double alpha_prime() const { return std::cbrt(1 + alpha * alpha * alpha); }
  double dxi() const { return alpha_prime() * xi2 - alpha * xi1; }
  double deta() const {
    const double ap = alpha_prime();
    return ap * ap * eta2 - alpha * alpha * eta1;
  }
};

enum class KernelPath { Auto, Factorized, Direct };

// Wedge contours: z through D3, w through D2, zeta through -d3, omega through -d2;
// the M-kernel contours sit at D1 and -d1. Offsets scaled by alpha are stored
// directly (aD2 = alpha*D2, ad2 = alpha*d2).
struct ContourConfig {
  double delta = 0.1;
  double radius = 2.0;
  int circle_points = 128;
  double d1 = 0.25, D1 = 0.25;
  double ad2 = 0.5, aD2 = 0.5;
  double d3 = 1.0, D3 = 1.0;
  int wedge_nodes = 60;
  double wedge_length = 7.0;
  KernelPath path = KernelPath::Auto;
  double direct_above = 1.0;
  unsigned threads = 1;

  void validate(double alpha) const {
    if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
    if (!(delta > 0)) throw std::invalid_argument("delta must be positive");
    if (!(radius > 1)) throw std::invalid_argument("circle radius must exceed 1");
    if (!(0 < d1 && d1 < ad2 && ad2 < d3)) throw std::invalid_argument("contour condition 0 < d1 < alpha d2 < d3 violated");
    if (!(0 < D1 && D1 < aD2 && aD2 < D3)) throw std::invalid_argument("contour condition 0 < D1 < alpha D2 < D3 violated");
    if (path == KernelPath::Direct && alpha < 0.25) throw std::invalid_argument("direct kernel path needs alpha >= 0.25");
  }
  bool use_direct(double alpha) const {
    return path == KernelPath::Direct || (path == KernelPath::Auto && alpha > direct_above);
  }
};

// Raw kernel values (no quadrature weights) on the shared node set.
struct KernelSet {
  RulePtr rule;
  Mat<double> M1, M2, M3;
  std::array<Mat<double>, 7> k;
  bool direct = false;

  DiscreteOperator<double> op(const Mat<double>& raw, std::string tag) const {
    const auto sw = sqrt_weights(*rule);
    return {rule, sw.asDiagonal() * raw * sw.asDiagonal(), std::move(tag)};
  }
};

inline RulePtr twotime_rule(const TwoTimeParams& p, const Precision& pr) {
  const double s = std::min({p.xi1 + p.eta1 * p.eta1, p.xi2 + p.eta2 * p.eta2, p.dxi() + p.deta() * p.deta()});
  return share(multiscale_rule((pr.nodes + 2) / 3, decay_hint(s), p.alpha_prime()));
}

namespace detail {

struct AF {
  double xi, eta;
  int sign;
  double operator()(double v) const { return a_func({xi, eta}, sign, v); }
};

template <class F>
Mat<double> grid(F&& f, const std::vector<double>& xs, const std::vector<double>& ys, double sx, double sy,
                 double cx = 0) {
  Mat<double> m(xs.size(), ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) m(i, j) = f(cx + sx * xs[i] + sy * ys[j]);
  return m;
}

inline Eigen::VectorXd vec(const std::vector<double>& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()); }

struct Tables {
  KernelSet ks;
  HalfLineRule lr;
  AF A1p, A1m, A2p, A2m, ADp, ADm;
  Eigen::ArrayXd epos, eneg;

  Tables(const TwoTimeParams& p, const ContourConfig& c, const Precision& pr)
      : A1p{p.xi1, p.eta1, 1}, A1m{p.xi1, p.eta1, -1}, A2p{p.xi2, p.eta2, 1}, A2m{p.xi2, p.eta2, -1},
        ADp{p.dxi(), p.deta(), 1}, ADm{p.dxi(), p.deta(), -1} {
    ks.rule = twotime_rule(p, pr);
    const double s = std::min({p.xi1 + p.eta1 * p.eta1, p.xi2 + p.eta2 * p.eta2, p.dxi() + p.deta() * p.deta()});
    lr = half_line_rule(pr.nodes, decay_hint(s));
    const Eigen::ArrayXd v = vec(ks.rule->x).array();
    epos = (c.delta * v).exp();
    eneg = (-c.delta * v).exp();
    const double ap = p.alpha_prime();
    const auto& V = ks.rule->x;
    ks.M1 = epos.matrix().asDiagonal() * kgen(A1p, A1m, V, 1, V, 1) * eneg.matrix().asDiagonal();
    ks.M2 = kgen(A2p, A2m, V, 1 / ap, V, 1 / ap).transpose() / ap;
    ks.M3 = kgen(ADp, ADm, V, 1, V, 1).transpose();
  }

  // K(x_i, y_j) = sum_l A+(sx x_i + l) w_l A-(sy y_j + l)
  Mat<double> kgen(const AF& fp, const AF& fm, const std::vector<double>& xs, double sx, const std::vector<double>& ys,
                   double sy) const {
    return grid(fp, xs, lr.x, sx, 1) * vec(lr.w).asDiagonal() * grid(fm, ys, lr.x, sy, 1).transpose();
  }
};

}  // namespace detail

// Each rational factor 1/(a-b) written as int_0^inf exp(-lambda(a-b)); every kernel becomes
// a short product of A-function tables over half-line nodes.
inline KernelSet assemble_factorized(const TwoTimeParams& p, const ContourConfig& c, const Precision& pr = {}) {
  using detail::grid;
  detail::Tables tb(p, c, pr);
  KernelSet& ks = tb.ks;
  const double a = p.alpha, ap = p.alpha_prime();
  const auto& V = ks.rule->x;
  const auto& L = tb.lr.x;
  const Eigen::VectorXd lw = detail::vec(tb.lr.w);
  const auto W = lw.asDiagonal();
  const Eigen::Index n = V.size();
  const auto &A1p = tb.A1p, &A1m = tb.A1m, &A2p = tb.A2p, &A2m = tb.A2m, &ADp = tb.ADp, &ADm = tb.ADm;
  const Eigen::ArrayXd &epos = tb.epos, &eneg = tb.eneg;

  const Mat<double> Em = grid(ADm, V, L, 1, -a), Ep = grid(ADp, V, L, 1, -a);
  const Mat<double> KL = tb.kgen(A1p, A1m, L, 1, L, 1);
  ks.k[0] = a * (Em * W) * KL.transpose() * (Ep * W).transpose();
  const Mat<double> T2 = grid(A1p, L, L, ap, 1);
  ks.k[1] = a * (grid(A2m, V, L, 1 / ap, a) * W) * T2 * (Ep * W).transpose();
  ks.k[2] = a * (Em * W) * grid(A1m, L, V, 1, 1) * eneg.matrix().asDiagonal();
  ks.k[3].resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) ks.k[3](i, j) = a / ap * eneg[j] * A2m((V[i] + a * V[j]) / ap);
  const Mat<double> T5 = grid(A1m, L, L, 1, ap);
  ks.k[4] = a * (Em * W) * T5 * (grid(A2p, V, L, 1 / ap, a) * W).transpose();
  const Mat<double> K1VL = tb.kgen(A1p, A1m, V, 1, L, 1);
  ks.k[5] = epos.matrix().asDiagonal() * (K1VL * W) * (grid(A1p, L, L, 1, 1) * W) * Ep.transpose();
  ks.k[6] = epos.matrix().asDiagonal() * (tb.kgen(A1p, A1m, V, 1, L, ap) * W) * grid(A2p, L, V, a, 1 / ap);
  return std::move(ks);
}

// Nested contour integrals by tensor-product quadrature on wedge contours. The M-kernels
// use the closed forms, which are exact and well conditioned for every alpha.
inline KernelSet assemble_direct(const TwoTimeParams& p, const ContourConfig& c, const Precision& pr = {}) {
  using CM = Mat<cplx>;
  const double a = p.alpha, ap = p.alpha_prime(), d = c.delta;
  KernelSet ks = detail::Tables(p, c, pr).ks;
  ks.direct = true;
  const auto& V = ks.rule->x;
  const Eigen::Index n = V.size();
  // |G| must decay on z, w and |1/G| on zeta, omega. The cubic fixes the sector, the quadratic
  // term with coefficient deta picks the half of it; paired contours share the angle so that
  // z - a w and a omega - zeta never vanish.
  const double pi = std::numbers::pi, de = p.deta();
  // On the default rays the quadratic term costs at most exp(|deta|^3/6).
  const bool tilt_r = de < -4, tilt_l = de > 4;
  const double right = tilt_r ? 0.22 * pi : pi / 3, left = tilt_l ? 0.78 * pi : 2 * pi / 3;
  const int nr = tilt_r ? 2 * c.wedge_nodes : c.wedge_nodes, nl = tilt_l ? 2 * c.wedge_nodes : c.wedge_nodes;
  const ContourRule z = wedge_rule(c.D3, right, c.wedge_length, nr);
  const ContourRule w = wedge_rule(c.aD2 / a, right, c.wedge_length, nr);
  const ContourRule ze = wedge_rule(-c.d3, left, c.wedge_length, nl);
  const ContourRule om = wedge_rule(-c.ad2 / a, left, c.wedge_length, nl);
  const cplx tp(0, 2 * std::numbers::pi);

  // F(v, t) = G_{x0 + sv*v, eta}(t) dt  (or 1/G for inv)
  auto table = [&](const ContourRule& r, double x0, double sv, double eta, bool inv) {
    CM m(n, r.size());
    for (Eigen::Index i = 0; i < n; ++i)
      for (std::size_t j = 0; j < r.size(); ++j) {
        const double x = x0 + sv * V[i];
        m(i, j) = r.w[j] * (inv ? g_weight_inv(x, eta, r.z[j]) : g_weight(x, eta, r.z[j]));
      }
    return m;
  };
  auto cauchy = [](const ContourRule& r1, double s1, const ContourRule& r2, double s2) {
    // 1/(s1 t1 - s2 t2), rows over r1
    CM m(r1.size(), r2.size());
    for (std::size_t i = 0; i < r1.size(); ++i)
      for (std::size_t j = 0; j < r2.size(); ++j) m(i, j) = 1.0 / (s1 * r1.z[i] - s2 * r2.z[j]);
    return m;
  };
  auto weights = [](const ContourRule& r, double x, double eta, bool inv) {
    Vec<cplx> g(r.size());
    for (std::size_t i = 0; i < r.size(); ++i)
      g[i] = r.w[i] * (inv ? g_weight_inv(x, eta, r.z[i]) : g_weight(x, eta, r.z[i]));
    return g;
  };

  const Vec<cplx> g1z = weights(z, p.xi1, p.eta1, false), g1ze = weights(ze, p.xi1, p.eta1, true);
  const CM Fw = table(w, p.dxi(), 1, p.deta(), false);
  const CM Fom = table(om, p.dxi(), 1, p.deta(), true);
  const CM Fom2 = table(om, p.xi2, 1 / ap, p.eta2, true);
  const CM Fw2 = table(w, p.xi2, 1 / ap, p.eta2, false);
  const CM Fze1 = table(ze, p.xi1, 1, p.eta1, true);
  const CM Fz1 = table(z, p.xi1, 1, p.eta1, false);

  const CM C_om_ze = cauchy(om, a, ze, 1);   // 1/(a om - ze)
  const CM C_ze_z = -cauchy(ze, 1, z, 1);    // 1/(z - ze), rows ze
  const CM C_z_ze = cauchy(z, 1, ze, 1);     // 1/(z - ze), rows z
  const CM C_z_w = cauchy(z, 1, w, a);       // 1/(z - a w)
  const CM C_om_z = -cauchy(om, a, z, ap);   // 1/(ap z - a om), rows om
  const CM C_ze_w = -cauchy(ze, ap, w, a);   // 1/(a w - ap ze), rows ze

  const Eigen::ArrayXd vv = detail::vec(V).array();
  const Eigen::VectorXd epos = (d * vv).exp().matrix(), eneg = (-d * vv).exp().matrix();
  const cplx tp2 = tp * tp, tp3 = tp2 * tp, tp4 = tp3 * tp;

  const CM ze_chain = g1ze.asDiagonal() * C_ze_z * g1z.asDiagonal() * C_z_w;  // (ze, w)
  ks.k[0] = (a * Fom * C_om_ze * ze_chain * Fw.transpose() / tp4).real();
  ks.k[1] = (a * Fom2 * C_om_z * g1z.asDiagonal() * C_z_w * Fw.transpose() / tp3).real();
  ks.k[2] = (a * Fom * C_om_ze * Fze1.transpose() / tp2).real() * eneg.asDiagonal();
  ks.k[3].resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double x = p.xi2 + (V[i] + a * V[j]) / ap;
      cplx s = 0;
      for (std::size_t q = 0; q < om.size(); ++q) s += om.w[q] * g_weight_inv(x, p.eta2, om.z[q]);
      ks.k[3](i, j) = (a / ap * eneg[j] * s / tp).real();
    }
  ks.k[4] = (a * Fom * C_om_ze * g1ze.asDiagonal() * C_ze_w * Fw2.transpose() / tp3).real();
  ks.k[5] = epos.asDiagonal() * (Fz1 * C_z_ze * ze_chain * Fw.transpose() / tp4).real();
  ks.k[6] = epos.asDiagonal() * (Fz1 * C_z_ze * g1ze.asDiagonal() * C_ze_w * Fw2.transpose() / tp3).real();
  return ks;
}

inline KernelSet assemble_kernels(const TwoTimeParams& p, const ContourConfig& c, const Precision& pr = {}) {
  c.validate(p.alpha);
  KernelSet ks = c.use_direct(p.alpha) ? assemble_direct(p, c, pr) : assemble_factorized(p, c, pr);
  bool finite = ks.M1.allFinite() && ks.M2.allFinite() && ks.M3.allFinite();
  for (const auto& k : ks.k) finite = finite && k.allFinite();
  if (!finite)
    throw std::runtime_error("two-time kernels overflowed (alpha=" + std::to_string(p.alpha) +
                             ", dxi=" + std::to_string(p.dxi()) + ", deta=" + std::to_string(p.deta()) + ")");
  return ks;
}

// Folded Nystrom blocks, ready for Q(u).
struct QParts {
  RulePtr rule;
  Mat<double> M1, M2, M3, k1, k25, k3, k4, k6, k7;

  explicit QParts(const KernelSet& ks) : rule(ks.rule) {
    const auto sw = sqrt_weights(*rule);
    auto f = [&](const Mat<double>& m) -> Mat<double> { return sw.asDiagonal() * m * sw.asDiagonal(); };
    M1 = f(ks.M1);
    M2 = f(ks.M2);
    M3 = f(ks.M3);
    k1 = f(ks.k[0]);
    k25 = f(ks.k[1] + ks.k[4]);
    k3 = f(ks.k[2]);
    k4 = f(ks.k[3]);
    k6 = f(ks.k[5]);
    k7 = f(ks.k[6]);
  }
};

inline BlockOperator<cplx> assemble_Q(cplx u, const QParts& q) {
  if (u == 0.0) throw std::invalid_argument("assemble_Q: u must be nonzero");
  const cplx ui = 1.0 / u;
  auto c = [](const Mat<double>& m) -> Mat<cplx> { return m.cast<cplx>(); };
  BlockOperator<cplx> b;
  b.b[0][0] = {q.rule, (2.0 - u - ui) * c(q.k1) + (u - 1.0) * c(q.k25) + (u - 1.0) * c(q.M3) - u * c(q.M2), "Q11"};
  b.b[0][1] = {q.rule, (u + ui - 2.0) * c(q.k3) + (1.0 - u) * c(q.k4), "Q12"};
  b.b[1][0] = {q.rule, (1.0 - ui) * c(q.k6) - c(q.k7), "Q21"};
  b.b[1][1] = {q.rule, (ui - 1.0) * c(q.M1), "Q22"};
  return b;
}

inline BlockOperator<cplx> assemble_Q(cplx u, const TwoTimeParams& p, const ContourConfig& c, const Precision& pr = {}) {
  return assemble_Q(u, QParts(assemble_kernels(p, c, pr)));
}

struct FttResult {
  double value = 0;     // raw real part, not clamped
  double imag = 0;      // imaginary residue of the u-integral
  double det_u1 = 0;    // det(I + Q(1))
  bool direct = false;
  int nodes = 0;

  double clamped() const { return std::min(1.0, std::max(0.0, value)); }
};

// F_tt = (1/2 pi i) int_{|u|=r} det(I + Q(u)) du/(u-1)
inline FttResult ftt(const TwoTimeParams& p, const ContourConfig& c = {}, const Precision& pr = {}) {
  const KernelSet ks = assemble_kernels(p, c, pr);
  const QParts q(ks);
  const CircleRule circ = circle_rule(c.radius, c.circle_points);
  std::vector<cplx> vals(circ.size());
  parallel_for(circ.size(), c.threads, [&](std::size_t k) {
    const cplx u = circ.u[k];
    vals[k] = circ.w[k] * fredholm_det(assemble_Q(u, q)) / (u - 1.0);
  });
  cplx s = 0;
  for (const cplx& v : vals) s += v;
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
    throw std::runtime_error("ftt: non-finite determinant; kernel tables overflowed for these parameters");
  FttResult r;
  r.value = s.real();
  r.imag = s.imag();
  r.det_u1 = fredholm_det(assemble_Q(1.0, q)).real();
  r.direct = ks.direct;
  r.nodes = int(ks.rule->size());
  return r;
}

// Small-alpha structure: det(I + Q(u)) -> F2(xi1 + eta1^2) F2(xi2 + eta2^2) det(I + R/u) as alpha -> 0,
// R = (I - M1)^{-1} M1. The gap is O(alpha); `extrapolated` removes the linear term using alpha/2.
struct SmallAlphaDeviation {
  double raw = 0, extrapolated = 0;
};

inline SmallAlphaDeviation small_alpha_deviation(const TwoTimeParams& p, const std::vector<cplx>& us,
                                                 const ContourConfig& c = {}, const Precision& pr = {}) {
  auto gaps = [&](double alpha) {
    TwoTimeParams pa = p;
    pa.alpha = alpha;
    const QParts q(assemble_kernels(pa, c, pr));
    const Eigen::Index n = q.M1.rows();
    const Mat<double> id = Mat<double>::Identity(n, n);
    const Mat<cplx> R = (id - q.M1).partialPivLu().solve(q.M1).cast<cplx>();
    const double f22 = tracy_widom_f2(p.xi1 + p.eta1 * p.eta1, pr) * tracy_widom_f2(p.xi2 + p.eta2 * p.eta2, pr);
    std::vector<cplx> g;
    for (const cplx& u : us) g.push_back(fredholm_det(assemble_Q(u, q)) - f22 * (id.cast<cplx>() + R / u).determinant());
    return g;
  };
  const auto g1 = gaps(p.alpha), g2 = gaps(p.alpha / 2);
  SmallAlphaDeviation d;
  for (std::size_t k = 0; k < us.size(); ++k) {
    d.raw = std::max(d.raw, std::abs(g1[k]));
    d.extrapolated = std::max(d.extrapolated, std::abs(2.0 * g2[k] - g1[k]));
  }
  return d;
}

struct LongTimeFit {
  std::vector<double> alphas, ratio;  // R(alpha) = F_tt/(F2 F2) - 1
  double e1_hat = 0, e2_hat = 0, e3_hat = 0;
  double e1_hat_quadratic = 0, e2_hat_quadratic = 0;
  double e1 = 0, e2 = 0;
  std::vector<double> residual;       // R - e1 a - e2 a^2 with the closed-form coefficients
  double slope = 0;                   // log-log slope of |residual| between the two largest alpha pairs a, a/2
};

inline LongTimeFit long_time_fit(const LongTimePoint& pt, std::vector<double> alphas, const ContourConfig& c = {},
                                 const Precision& pr = {}) {
  if (alphas.size() < 4) throw std::invalid_argument("long_time_fit: need at least 4 alpha values");
  for (double a : alphas)
    if (!(a > 0 && a <= 0.2)) throw std::invalid_argument("long_time_fit: alphas must lie in (0, 0.2]");
  LongTimeFit f;
  f.alphas = alphas;
  const double f22 = tracy_widom_f2(pt.xi1 + pt.eta1 * pt.eta1, pr) * tracy_widom_f2(pt.xi2 + pt.eta2 * pt.eta2, pr);
  if (f22 < 1e-12) throw std::runtime_error("long_time_fit: F2 F2 below 1e-12");
  for (double a : alphas) f.ratio.push_back(ftt({pt.xi1, pt.eta1, pt.xi2, pt.eta2, a}, c, pr).value / f22 - 1);

  const Eigen::Index m = alphas.size();
  Mat<double> X(m, 3);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double a = alphas[i];
    X(i, 0) = a;
    X(i, 1) = a * a;
    X(i, 2) = a * a * a;
    y[i] = f.ratio[i];
  }
  const Eigen::VectorXd b3 = X.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd b2 = X.leftCols(2).colPivHouseholderQr().solve(y);
  f.e1_hat = b3[0];
  f.e2_hat = b3[1];
  f.e3_hat = b3[2];
  f.e1_hat_quadratic = b2[0];
  f.e2_hat_quadratic = b2[1];

  const ExpansionResult e = long_time_coeffs(pt, pr);
  f.e1 = e.e1;
  f.e2 = e.e2;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double a = alphas[i];
    f.residual.push_back(f.ratio[i] - e.e1 * a - e.e2 * a * a);
  }
  // slope from pairs (a, a/2) present in the list, largest first
  for (Eigen::Index i = m - 1; i >= 0; --i)
    for (Eigen::Index j = 0; j < m; ++j)
      if (std::abs(alphas[j] - alphas[i] / 2) < 1e-12) {
        f.slope = std::log(std::abs(f.residual[i] / f.residual[j])) / std::log(2.0);
        return f;
      }
  return f;
}

// xi2 = (xi + alpha xi1)/alpha', eta2 = (eta + alpha^2 eta1)/alpha'^2
struct ShortTimeFrame {
  double xi1 = 0, eta1 = 0, xi = 0, eta = 0, alpha = 10;

  TwoTimeParams params(double xi1_override) const {
    const double ap = std::cbrt(1 + alpha * alpha * alpha);
    return {xi1_override, eta1, (xi + alpha * xi1) / ap, (eta + alpha * alpha * eta1) / (ap * ap), alpha};
  }
  TwoTimeParams params() const { return params(xi1); }
};

struct ShortTimeCheck {
  double lhs = 0;        // partial d F_tt / d xi1 at the frame point, xi2 held fixed
  double lhs_total = 0;  // total derivative with xi2 moving with xi1
  double rhs = 0;
  double psi = 0;
  double gap() const { return std::abs(lhs - rhs); }
};

inline ShortTimeCheck short_time_check(const ShortTimeFrame& f, const ContourConfig& c = {}, const Precision& pr = {},
                                       bool with_total = false) {
  if (f.alpha < 5) throw std::invalid_argument("short_time_check: alpha must be >= 5");
  ShortTimeCheck r;
  const TwoTimeParams base = f.params();
  double err = 0;
  r.lhs = richardson_d1(
      [&](double x1) {
        TwoTimeParams p = base;
        p.xi1 = x1;
        return ftt(p, c, pr).value;
      },
      f.xi1, pr.h, &err);
  if (with_total) {
    r.lhs_total = richardson_d1(
        [&](double x1) {
          ShortTimeFrame g = f;
          g.xi1 = x1;
          return ftt(g.params(), c, pr).value;
        },
        f.xi1, pr.h);
  }
  const double s1 = f.xi1 + f.eta1 * f.eta1;
  const double dF2 = f2_derivs(s1, pr).d1;
  const double e2 = f.eta * f.eta;
  const double dpsi = richardson_d1(
      [&](double x) { return tracy_widom_f2(x + e2, pr) * short_time_psi(x, f.eta, pr).psi; }, f.xi, pr.h);
  r.rhs = dF2 * dpsi;
  r.psi = short_time_psi(f.xi, f.eta, pr).psi;
  return r;
}

}  // namespace kpztt
