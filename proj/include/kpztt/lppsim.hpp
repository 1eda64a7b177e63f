#pragma once
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "coeffs.hpp"
#include "parallel.hpp"

namespace kpztt {

// Philox4x32-10 (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  Philox4x32(std::uint64_t seed, std::uint64_t stream)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
        ctr_{0, 0, std::uint32_t(stream), std::uint32_t(stream >> 32)} {}

  static Block round10(Block c, std::array<std::uint32_t, 2> k) {
    for (int r = 0; r < 10; ++r) {
      const std::uint64_t p0 = std::uint64_t(0xD2511F53u) * c[0];
      const std::uint64_t p1 = std::uint64_t(0xCD9E8D57u) * c[2];
      c = {std::uint32_t(p1 >> 32) ^ c[1] ^ k[0], std::uint32_t(p1), std::uint32_t(p0 >> 32) ^ c[3] ^ k[1],
           std::uint32_t(p0)};
      k[0] += 0x9E3779B9u;
      k[1] += 0xBB67AE85u;
    }
    return c;
  }

  std::uint32_t operator()() {
    if (pos_ == 4) {
      buf_ = round10(ctr_, key_);
      if (++ctr_[0] == 0) ++ctr_[1];
      pos_ = 0;
    }
    return buf_[pos_++];
  }

 private:
  std::array<std::uint32_t, 2> key_;
  Block ctr_;
  Block buf_{};
  int pos_ = 4;
};

// P[w = k] = (1-q) q^k by inversion against thresholds floor(q^k 2^32).
class GeometricSampler {
 public:
  explicit GeometricSampler(double q) : q_(q) {
    if (!(q > 0 && q < 1)) throw std::invalid_argument("geometric: q must lie in (0,1)");
    for (double t = q * 4294967296.0; t >= 1; t *= q) thr_.push_back(std::uint32_t(std::min(t, 4294967295.0)));
  }

  template <class G>
  std::uint32_t operator()(G& g) const {
    std::uint32_t w = 0;
    for (;;) {
      const std::uint32_t u = g();
      std::size_t k = 0;
      while (k < thr_.size() && u < thr_[k]) ++k;
      w += std::uint32_t(k);
      if (k < thr_.size()) return w;
      // memoryless tail past the table
    }
  }

  double q() const { return q_; }

 private:
  double q_;
  std::vector<std::uint32_t> thr_;
};

struct ScalingConstants {
  double c1, c2, c3;
};

inline ScalingConstants scaling_constants(double q) {
  if (!(q > 0 && q < 1)) throw std::invalid_argument("scaling_constants: q must lie in (0,1)");
  const double s = std::sqrt(q);
  return {std::pow(q, -1.0 / 6) * std::pow(1 + s, 2.0 / 3), 2 * s / (1 - s),
          std::pow(q, 1.0 / 6) * std::pow(1 + s, 1.0 / 3) / (1 - s)};
}

struct LatticePoint {
  int m = 1, n = 1;
  bool operator==(const LatticePoint&) const = default;
};

// h(x,t) at real x as a combination of at most two lattice values G(m,n).
struct HeightStencil {
  LatticePoint a, b;
  double wa = 1, wb = 0;
  int t = 0;
  double x = 0;
};

// Rounds 2tT to the nearest integer and interpolates linearly in x between the two
// neighbours with x + t odd.
inline HeightStencil height_stencil(double eta, double t, double T, const ScalingConstants& c) {
  HeightStencil s;
  const double tT = t * T;
  s.t = int(std::lround(2 * tT));
  s.x = 2 * c.c1 * eta * std::pow(tT, 2.0 / 3);
  const int lo = int(std::floor(s.x));
  const int x0 = ((lo + s.t) % 2 != 0) ? lo : lo - 1;  // x0 + t odd, x0 <= x < x0 + 2
  const double f = (s.x - x0) / 2;
  auto pt = [&](int x) { return LatticePoint{(s.t + x + 1) / 2, (s.t - x + 1) / 2}; };
  s.a = pt(x0);
  s.b = pt(x0 + 2);
  s.wa = 1 - f;
  s.wb = f;
  if (std::min({s.a.m, s.a.n, s.b.m, s.b.n}) < 1)
    throw std::invalid_argument("height_stencil: |x| too large for t (lattice point outside the quadrant)");
  return s;
}

inline double rescale_height(double h, double t, double T, const ScalingConstants& c) {
  const double tT = t * T;
  return (h - c.c2 * tT) / (c.c3 * std::cbrt(tT));
}

struct LppConfig {
  double q = 0.25, T = 400, t1 = 0.5, t2 = 1, eta1 = 0, eta2 = 0;
  std::size_t samples = 10000;
  std::uint64_t seed = 20261015;
  unsigned threads = 0;

  double alpha() const { return t1 / (t2 - t1); }

  void validate() const {
    if (!(q > 0 && q < 1)) throw std::invalid_argument("lpp: q must lie in (0,1)");
    if (!(T >= 1)) throw std::invalid_argument("lpp: T must be >= 1");
    if (!(t1 > 0 && t1 < t2)) throw std::invalid_argument("lpp: need 0 < t1 < t2");
    if (samples == 0) throw std::invalid_argument("lpp: samples must be positive");
    if (2 * t2 * T > 1e6) throw std::invalid_argument("lpp: lattice extent above 1e6");
  }
};

// Fills G over [1,M] x [1,N] one row at a time and reads the requested points as rows complete.
template <class Rng>
void sample_lpp(Rng& g, const GeometricSampler& geo, int M, int N, const std::vector<LatticePoint>& pts,
                std::vector<std::int64_t>& out, std::vector<std::int64_t>& row) {
  row.assign(N + 1, 0);
  out.assign(pts.size(), 0);
  for (int m = 1; m <= M; ++m) {
    std::int64_t left = 0;
    for (int n = 1; n <= N; ++n) {
      left = std::max(left, row[n]) + geo(g);
      row[n] = left;
    }
    for (std::size_t k = 0; k < pts.size(); ++k)
      if (pts[k].m == m) out[k] = row[pts[k].n];
  }
}

struct LppSamples {
  LppConfig cfg;
  ScalingConstants consts{};
  HeightStencil s1, s2;
  std::vector<double> h1, h2;  // rescaled heights plus eta^2, indexed by sample
  std::uint64_t cells = 0;
  double seconds = 0;
};

inline LppSamples simulate_lpp(const LppConfig& cfg) {
  cfg.validate();
  LppSamples r;
  r.cfg = cfg;
  r.consts = scaling_constants(cfg.q);
  r.s1 = height_stencil(cfg.eta1, cfg.t1, cfg.T, r.consts);
  r.s2 = height_stencil(cfg.eta2, cfg.t2, cfg.T, r.consts);
  const std::vector<LatticePoint> pts{r.s1.a, r.s1.b, r.s2.a, r.s2.b};
  int M = 0, N = 0;
  for (const auto& p : pts) {
    M = std::max(M, p.m);
    N = std::max(N, p.n);
  }
  const GeometricSampler geo(cfg.q);
  r.h1.resize(cfg.samples);
  r.h2.resize(cfg.samples);
  const auto t0 = std::chrono::steady_clock::now();
  const unsigned nt = resolve_threads(cfg.threads);
  std::vector<std::vector<std::int64_t>> rows(nt), outs(nt);
  const std::size_t chunk = (cfg.samples + nt - 1) / nt;
  parallel_for(nt, nt, [&](std::size_t t) {
    for (std::size_t i = t * chunk; i < std::min(cfg.samples, (t + 1) * chunk); ++i) {
      Philox4x32 g(cfg.seed, i);
      sample_lpp(g, geo, M, N, pts, outs[t], rows[t]);
      const auto& o = outs[t];
      const double g1 = r.s1.wa * double(o[0]) + r.s1.wb * double(o[1]);
      const double g2 = r.s2.wa * double(o[2]) + r.s2.wb * double(o[3]);
      r.h1[i] = rescale_height(g1, cfg.t1, cfg.T, r.consts) + cfg.eta1 * cfg.eta1;
      r.h2[i] = rescale_height(g2, cfg.t2, cfg.T, r.consts) + cfg.eta2 * cfg.eta2;
    }
  });
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.cells = std::uint64_t(M) * N * cfg.samples;
  return r;
}

struct EmpiricalJoint {
  std::vector<double> x1, x2;
  std::vector<std::vector<std::size_t>> counts;  // counts[i][j] = #{h1 <= x1[i], h2 <= x2[j]}
  std::vector<std::size_t> marg1, marg2;
  std::size_t total = 0;

  double cdf(std::size_t i, std::size_t j) const { return double(counts[i][j]) / total; }
};

inline EmpiricalJoint empirical_joint(const LppSamples& s, std::vector<double> x1, std::vector<double> x2) {
  EmpiricalJoint e;
  e.x1 = std::move(x1);
  e.x2 = std::move(x2);
  e.total = s.h1.size();
  e.counts.assign(e.x1.size(), std::vector<std::size_t>(e.x2.size(), 0));
  e.marg1.assign(e.x1.size(), 0);
  e.marg2.assign(e.x2.size(), 0);
  for (std::size_t k = 0; k < e.total; ++k) {
    for (std::size_t i = 0; i < e.x1.size(); ++i) {
      if (s.h1[k] > e.x1[i]) continue;
      ++e.marg1[i];
      for (std::size_t j = 0; j < e.x2.size(); ++j)
        if (s.h2[k] <= e.x2[j]) ++e.counts[i][j];
    }
    for (std::size_t j = 0; j < e.x2.size(); ++j)
      if (s.h2[k] <= e.x2[j]) ++e.marg2[j];
  }
  return e;
}

inline EmpiricalJoint empirical_two_time(const LppConfig& cfg, std::vector<double> x1, std::vector<double> x2) {
  if (cfg.samples < 1000) throw std::invalid_argument("empirical_two_time: need at least 1000 samples");
  return empirical_joint(simulate_lpp(cfg), std::move(x1), std::move(x2));
}

// F2 on a uniform grid, linear in between; 0 and 1 outside.
class F2Table {
 public:
  F2Table(double lo = -8, double hi = 5, double step = 0.01, const Precision& pr = {}) : lo_(lo), hi_(hi), step_(step) {
    const std::size_t n = std::size_t(std::ceil((hi - lo) / step)) + 1;
    v_.resize(n);
    for (std::size_t i = 0; i < n; ++i) v_[i] = tracy_widom_f2(lo + i * step, pr);
  }

  double operator()(double s) const {
    if (s < lo_) return 0;
    if (s > hi_) return 1;
    const double u = (s - lo_) / step_;
    if (u >= double(v_.size() - 1)) return v_.back();
    const std::size_t i = std::size_t(u);
    const double f = u - i;
    return (1 - f) * v_[i] + f * v_[i + 1];
  }

 private:
  double lo_, hi_, step_;
  std::vector<double> v_;
};

// sup_x |F_n(x) - F(x)|
template <class Cdf>
double ks_distance(std::vector<double> xs, Cdf&& F) {
  std::sort(xs.begin(), xs.end());
  const double n = double(xs.size());
  double d = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = F(xs[i]);
    d = std::max({d, std::abs((i + 1) / n - f), std::abs(i / n - f)});
  }
  return d;
}

}  // namespace kpztt
