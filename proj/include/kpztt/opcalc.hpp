#pragma once
#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include "quad.hpp"

namespace kpztt {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using RulePtr = std::shared_ptr<const HalfLineRule>;

inline RulePtr share(HalfLineRule r) { return std::make_shared<const HalfLineRule>(std::move(r)); }

inline Eigen::VectorXd sqrt_weights(const Rule& r) {
  Eigen::VectorXd s(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) s[i] = std::sqrt(r.w[i]);
  return s;
}

// Function sampled at the nodes (raw values, no weights).
struct HalfLineVector {
  RulePtr rule;
  Eigen::VectorXd v;

  Eigen::VectorXd folded() const { return sqrt_weights(*rule).cwiseProduct(v); }
};

template <class F>
HalfLineVector sample(RulePtr rule, F&& f) {
  HalfLineVector h{rule, Eigen::VectorXd(rule->size())};
  for (std::size_t i = 0; i < rule->size(); ++i) h.v[i] = f(rule->x[i]);
  return h;
}

inline HalfLineVector unfold(RulePtr rule, const Eigen::VectorXd& f) {
  return {rule, f.cwiseQuotient(sqrt_weights(*rule))};
}

inline double inner(const HalfLineVector& a, const HalfLineVector& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.rule->size(); ++i) s += a.rule->w[i] * a.v[i] * b.v[i];
  return s;
}

// Nystrom matrix sqrt(w_i) K(x_i,x_j) sqrt(w_j).
template <class S = double>
struct DiscreteOperator {
  RulePtr rule;
  Mat<S> m;
  std::string tag;

  Eigen::Index n() const { return m.rows(); }
};

namespace detail {
inline void check_same(const RulePtr& a, const RulePtr& b) {
  if (a == b) return;
  if (!a || !b || a->x != b->x || a->w != b->w) throw std::invalid_argument("operator rule mismatch");
}
}  // namespace detail

template <class S = double, class F>
DiscreteOperator<S> from_kernel(RulePtr rule, F&& k, std::string tag = {}) {
  const auto sw = sqrt_weights(*rule);
  const Eigen::Index n = rule->size();
  DiscreteOperator<S> op{rule, Mat<S>(n, n), std::move(tag)};
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) op.m(i, j) = sw[i] * S(k(rule->x[i], rule->x[j])) * sw[j];
  return op;
}

// Kernel A(v1+v2)
template <class F>
DiscreteOperator<double> hankel_op(RulePtr rule, F&& a, std::string tag = {}) {
  return from_kernel<double>(rule, [&](double x, double y) { return a(x + y); }, std::move(tag));
}

inline DiscreteOperator<double> rank_one(const HalfLineVector& a, const HalfLineVector& b, std::string tag = {}) {
  detail::check_same(a.rule, b.rule);
  return {a.rule, a.folded() * b.folded().transpose(), std::move(tag)};
}

template <class S>
DiscreteOperator<S> compose(const DiscreteOperator<S>& p, const DiscreteOperator<S>& q) {
  detail::check_same(p.rule, q.rule);
  return {p.rule, p.m * q.m, p.tag + "*" + q.tag};
}

template <class S>
DiscreteOperator<S> add(const DiscreteOperator<S>& p, const DiscreteOperator<S>& q) {
  detail::check_same(p.rule, q.rule);
  return {p.rule, p.m + q.m, p.tag + "+" + q.tag};
}

template <class S>
DiscreteOperator<S> scale(const DiscreteOperator<S>& p, S c) {
  return {p.rule, c * p.m, p.tag};
}

template <class S>
DiscreteOperator<S> transpose(const DiscreteOperator<S>& p) {
  return {p.rule, p.m.transpose(), p.tag + "^T"};
}

template <class S>
DiscreteOperator<S> identity(RulePtr rule) {
  const Eigen::Index n = rule->size();
  return {rule, Mat<S>::Identity(n, n), "I"};
}

// Applies (I-K)^{-r}; one LU per operator.
class Resolvent {
 public:
  explicit Resolvent(const DiscreteOperator<double>& k, double max_cond = 1e8)
      : rule_(k.rule), lu_(Mat<double>::Identity(k.n(), k.n()) - k.m) {
    const double rc = lu_.rcond();
    if (!(rc > 1.0 / max_cond)) throw std::runtime_error("resolvent: I-K is near singular (" + k.tag + ")");
  }

  Eigen::VectorXd apply_folded(Eigen::VectorXd f, int r) const {
    for (int i = 0; i < r; ++i) f = lu_.solve(f);
    return f;
  }
  HalfLineVector apply(const HalfLineVector& f, int r) const {
    detail::check_same(rule_, f.rule);
    return unfold(rule_, apply_folded(f.folded(), r));
  }
  DiscreteOperator<double> apply(const DiscreteOperator<double>& x, int r) const {
    detail::check_same(rule_, x.rule);
    Mat<double> m = x.m;
    for (int i = 0; i < r; ++i) m = lu_.solve(m);
    return {rule_, m, "R*" + x.tag};
  }

 private:
  RulePtr rule_;
  Eigen::PartialPivLU<Mat<double>> lu_;
};

template <class S>
S fredholm_det(const DiscreteOperator<S>& k) {
  return (Mat<S>::Identity(k.n(), k.n()) + k.m).determinant();
}

template <class S>
S trace(const DiscreteOperator<S>& k) {
  return k.m.trace();
}

template <class S>
S trace_product(const DiscreteOperator<S>& p, const DiscreteOperator<S>& q) {
  detail::check_same(p.rule, q.rule);
  return p.m.cwiseProduct(q.m.transpose()).sum();
}

// K^{(-k)}(v) = int lambda^{k-1}/(k-1)! K(v,lambda) d lambda
inline HalfLineVector kminus(const DiscreteOperator<double>& k, int kk) {
  if (kk < 1) throw std::invalid_argument("kminus: k must be >= 1");
  const auto& r = *k.rule;
  const auto sw = sqrt_weights(r);
  double fact = 1;
  for (int j = 2; j < kk; ++j) fact *= j;
  Eigen::VectorXd g(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) g[j] = sw[j] * std::pow(r.x[j], kk - 1) / fact;
  return {k.rule, (k.m * g).cwiseQuotient(sw)};
}

template <class S>
struct BlockOperator {
  std::array<std::array<DiscreteOperator<S>, 2>, 2> b;

  Mat<S> assemble() const {
    const Eigen::Index n = b[0][0].n();
    Mat<S> m(2 * n, 2 * n);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        if (b[i][j].n() != n) throw std::invalid_argument("block dimension mismatch");
        m.block(i * n, j * n, n, n) = b[i][j].m;
      }
    return m;
  }
};

template <class S>
S fredholm_det(const BlockOperator<S>& q) {
  Mat<S> m = q.assemble();
  m.diagonal().array() += S(1);
  return m.partialPivLu().determinant();
}

}  // namespace kpztt
