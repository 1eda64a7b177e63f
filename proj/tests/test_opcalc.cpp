#include <gtest/gtest.h>

#include <cmath>

#include "kpztt/coeffs.hpp"

using namespace kpztt;

namespace {

RulePtr rule(int n = 48, double hint = 2) { return share(half_line_rule(n, hint)); }

}  // namespace

TEST(Hankel, ExponentialTrace) {
  const auto op = hankel_op(rule(48, 20), [](double v) { return std::exp(-v); });
  EXPECT_NEAR(trace(op), 0.5, 1e-10);
}

TEST(Hankel, ZeroFunction) {
  const auto op = hankel_op(rule(), [](double) { return 0.0; });
  EXPECT_EQ(op.m.norm(), 0.0);
  EXPECT_EQ(fredholm_det(op), 1.0);
}

TEST(Hankel, SquareIsAiryKernel) {
  const RulePtr r = rule(64);
  const auto a = hankel_op(r, [](double v) { return airy_ai(v); });
  const auto k = compose(a, a);
  const auto sw = sqrt_weights(*r);
  const HalfLineRule q = half_line_rule(96);
  for (int i : {0, 7, 20}) {
    for (int j : {3, 15}) {
      const double x = r->x[i], y = r->x[j];
      const double direct = integrate(q, [&](double s) { return airy_ai(x + s) * airy_ai(y + s); });
      EXPECT_NEAR(k.m(i, j) / (sw[i] * sw[j]), direct, 1e-10);
    }
  }
}

TEST(RankOne, TraceAndDeterminant) {
  const RulePtr r = rule(48, 20);
  const auto e = sample(r, [](double v) { return std::exp(-v); });
  const auto k = rank_one(e, e);
  EXPECT_NEAR(trace(k), 0.5, 1e-10);
  EXPECT_NEAR(fredholm_det(scale(k, -1.0)), 0.5, 1e-10);
  Eigen::JacobiSVD<Mat<double>> svd(k.m);
  EXPECT_LT(svd.singularValues()[1], 1e-12);
}

TEST(Compose, IdentityAndTranspose) {
  const RulePtr r = rule(24);
  const auto p = from_kernel<double>(r, [](double x, double y) { return std::exp(-x - 2 * y); });
  const auto q = from_kernel<double>(r, [](double x, double y) { return std::exp(-(x - y) * (x - y)); });
  EXPECT_EQ((compose(p, identity<double>(r)).m - p.m).norm(), 0.0);
  EXPECT_NEAR((transpose(compose(p, q)).m - compose(transpose(q), transpose(p)).m).norm(), 0, 1e-14);
  EXPECT_NEAR(trace_product(p, q), trace_product(q, p), 1e-12);
}

TEST(Compose, RuleMismatchThrows) {
  const auto a = hankel_op(rule(24), [](double v) { return std::exp(-v); });
  const auto b = hankel_op(rule(30), [](double v) { return std::exp(-v); });
  EXPECT_THROW(compose(a, b), std::invalid_argument);
}

TEST(Compose, KiMatchesDirectQuadrature) {
  const double xi = 0.2, eta = 0.4;
  const KernelContext c(xi, eta, {64, 1e-3});
  const auto sw = sqrt_weights(*c.rule);
  const HalfLineRule q = half_line_rule(96);
  for (int i : {0, 10, 30})
    for (int j : {2, 25}) {
      const double x = c.rule->x[i], y = c.rule->x[j];
      const double direct =
          integrate(q, [&](double l) { return a_func({xi, eta}, +1, x + l) * a_func({xi, eta}, -1, l + y); });
      EXPECT_NEAR(c.k.m(i, j) / (sw[i] * sw[j]), direct, 1e-10);
    }
}

TEST(Resolvent, ShermanMorrison) {
  const RulePtr r = rule(48, 20);
  const auto a = sample(r, [](double v) { return std::exp(-v); });
  const auto b = sample(r, [](double v) { return 0.5 * std::exp(-2 * v); });
  const Resolvent res(rank_one(a, b));
  const auto x = res.apply(a, 1);
  const double f = 1 / (1 - inner(b, a));
  for (Eigen::Index i = 0; i < x.v.size(); ++i) EXPECT_NEAR(x.v[i], a.v[i] * f, 1e-12);
}

TEST(Resolvent, ZeroKernelIsIdentity) {
  const RulePtr r = rule(24);
  const Resolvent res(hankel_op(r, [](double) { return 0.0; }));
  const auto a = sample(r, [](double v) { return std::cos(v); });
  EXPECT_NEAR((res.apply(a, 1).v - a.v).norm(), 0, 1e-15);
}

TEST(Resolvent, NeumannAtSmallNorm) {
  const RulePtr r = rule(24);
  const auto k = scale(hankel_op(r, [](double v) { return airy_ai(v); }), 0.05);
  const Resolvent res(k);
  const auto id = identity<double>(r);
  const Mat<double> approx = id.m + k.m + k.m * k.m;
  const double kn = k.m.norm();
  EXPECT_LT((res.apply(id, 1).m - approx).norm(), 2 * kn * kn * kn);
}

TEST(Resolvent, SingularThrows) {
  const RulePtr r = rule(24, 20);
  const auto e = sample(r, [](double v) { return std::exp(-v); });
  const auto k = scale(rank_one(e, e), 1 / inner(e, e));
  EXPECT_THROW(Resolvent{k}, std::runtime_error);
}

TEST(Fredholm, AiryDeterminantStableUnderDoubling) {
  auto det = [](int n) {
    const auto a = hankel_op(rule(n), [](double v) { return airy_ai(v); });
    return fredholm_det(scale(compose(a, a), -1.0));
  };
  EXPECT_NEAR(det(48), det(96), 1e-9);
}

TEST(Fredholm, ZeroIsOne) {
  const auto z = hankel_op(rule(16), [](double) { return 0.0; });
  EXPECT_EQ(fredholm_det(z), 1.0);
}

TEST(Trace, AiryKernelDiagonal) {
  const RulePtr r = rule(64);
  const auto a = hankel_op(r, [](double v) { return airy_ai(v); });
  const double tr = trace(compose(a, a));
  // int_0^inf K(v,v) dv = int_0^inf s Ai(s)^2 ds
  const double direct = integrate(half_line_rule(96), [](double s) { return s * airy_ai(s) * airy_ai(s); });
  EXPECT_NEAR(tr, direct, 1e-9);
}

TEST(Kminus, HankelMatchesAntiderivative) {
  const RulePtr r = rule(64);
  const auto a = hankel_op(r, [](double v) { return airy_ai(v); });
  for (int k : {1, 2}) {
    const auto m = kminus(a, k);
    for (int i : {0, 10, 30})
      EXPECT_NEAR(m.v[i], antideriv([](double x) { return airy_ai(x); }, k, r->x[i], half_line_rule(96)), 1e-10);
  }
}

TEST(Kminus, ZeroKernel) {
  const auto z = hankel_op(rule(16), [](double) { return 0.0; });
  EXPECT_EQ(kminus(z, 2).v.norm(), 0.0);
  EXPECT_THROW(kminus(z, 0), std::invalid_argument);
}

TEST(Kminus, SemigroupStep) {
  // K^{(-2)}(v) = int_v^inf K^{(-1)}(u) du for a Hankel kernel
  const RulePtr r = rule(64);
  const auto a = hankel_op(r, [](double v) { return airy_ai(v); });
  const auto k2 = kminus(a, 2);
  const HalfLineRule q = half_line_rule(96);
  const double v = r->x[5];
  const double direct =
      integrate(q, [&](double l) { return antideriv([](double x) { return airy_ai(x); }, 1, v + l, q); });
  EXPECT_NEAR(k2.v[5], direct, 1e-9);
}

TEST(Block, DeterminantOfDiagonalBlocks) {
  const RulePtr r = rule(16);
  const auto a = hankel_op(r, [](double v) { return 0.3 * std::exp(-v); });
  const auto z = hankel_op(r, [](double) { return 0.0; });
  BlockOperator<double> b;
  b.b[0][0] = a;
  b.b[0][1] = z;
  b.b[1][0] = z;
  b.b[1][1] = a;
  EXPECT_NEAR(fredholm_det(b), fredholm_det(a) * fredholm_det(a), 1e-14);
}
