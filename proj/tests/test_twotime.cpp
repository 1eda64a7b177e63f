#include <gtest/gtest.h>

#include <cmath>

#include "kpztt/twotime.hpp"

using namespace kpztt;

namespace {

ContourConfig forced(KernelPath p) {
  ContourConfig c;
  c.path = p;
  return c;
}

}  // namespace

TEST(TwoTimeParams, DerivedQuantities) {
  const TwoTimeParams p{0.5, 0.2, -0.3, 0.4, 2.0};
  EXPECT_NEAR(p.alpha_prime(), std::cbrt(9.0), 1e-15);
  EXPECT_NEAR(p.dxi(), std::cbrt(9.0) * -0.3 - 1.0, 1e-14);
  EXPECT_NEAR(p.deta(), std::cbrt(81.0) * 0.4 - 0.8, 1e-14);
}

TEST(ContourConfig, Validation) {
  ContourConfig c;
  EXPECT_NO_THROW(c.validate(0.5));
  EXPECT_THROW(c.validate(0.0), std::invalid_argument);
  c.d1 = 0.6;
  EXPECT_THROW(c.validate(0.5), std::invalid_argument);
  c = {};
  c.radius = 1.0;
  EXPECT_THROW(c.validate(0.5), std::invalid_argument);
  EXPECT_THROW(forced(KernelPath::Direct).validate(0.1), std::invalid_argument);
}

// independent NumPy/SciPy prototype of the same determinant formula
TEST(Ftt, MatchesPrototype) {
  struct Ref {
    TwoTimeParams p;
    double v;
  };
  const Ref refs[] = {
      {{0, 0, 0, 0, 0.05}, 0.9398489814667137},
      {{0, 0, 0, 0, 0.5}, 0.9425739881720545},
      {{0.2, 0.3, -0.4, 0.2, 0.1}, 0.9211906905091691},
      {{-0.5, 0, 0.5, 0, 0.8}, 0.9112722058366347},
  };
  for (const auto& r : refs) EXPECT_NEAR(ftt(r.p).value, r.v, 1e-9) << r.p.alpha;
}

TEST(Ftt, ImaginaryResidueSmall) {
  const FttResult r = ftt({0.2, 0.3, -0.4, 0.2, 0.3});
  EXPECT_LT(std::abs(r.imag), 1e-8);
}

TEST(Ftt, DetAtOneIsSecondMarginal) {
  for (const TwoTimeParams& p : {TwoTimeParams{0, 0, 0, 0, 0.3}, TwoTimeParams{-0.5, 0.4, 0.3, -0.6, 0.7}}) {
    const FttResult r = ftt(p);
    EXPECT_NEAR(r.det_u1, tracy_widom_f2(p.xi2 + p.eta2 * p.eta2), 1e-6);
  }
}

TEST(Ftt, Marginals) {
  EXPECT_NEAR(ftt({8, 0, 0.3, 0.5, 0.5}).value, tracy_widom_f2(0.3 + 0.25), 1e-4);
  EXPECT_NEAR(ftt({-0.5, 0.4, 8, 0, 0.5}).value, tracy_widom_f2(-0.5 + 0.16), 1e-4);
}

TEST(Ftt, MonotoneInBothThresholds) {
  const double xs[] = {-1.5, -0.5, 0.5};
  double prev_row[3] = {0, 0, 0};
  for (double x1 : xs) {
    double prev = 0;
    for (int j = 0; j < 3; ++j) {
      const double v = ftt({x1, 0, xs[j], 0, 0.5}).value;
      EXPECT_GE(v, prev - 1e-9);
      EXPECT_GE(v, prev_row[j] - 1e-9);
      prev = v;
      prev_row[j] = v;
    }
  }
}

TEST(Ftt, PathsAgree) {
  const TwoTimeParams p{0.2, 0.3, -0.4, 0.2, 0.5};
  const double a = ftt(p, forced(KernelPath::Factorized)).value;
  const double b = ftt(p, forced(KernelPath::Direct)).value;
  EXPECT_NEAR(a, b, 1e-6);
}

TEST(Ftt, InvariantUnderContourChanges) {
  const TwoTimeParams p{-0.3, 0.2, 0.4, -0.1, 0.5};
  const double base = ftt(p).value;
  ContourConfig c;
  c.delta = 0.25;
  c.radius = 3.0;
  EXPECT_NEAR(ftt(p, c).value, base, 1e-6);
  c = forced(KernelPath::Direct);
  c.d1 = c.D1 = 0.2;
  c.ad2 = c.aD2 = 0.45;
  c.d3 = c.D3 = 0.9;
  EXPECT_NEAR(ftt(p, c).value, base, 1e-6);
}

TEST(Ftt, AutoSwitchesToDirectAboveOne) {
  EXPECT_FALSE(ftt({0, 0, 0, 0, 0.5}).direct);
  ShortTimeFrame f{0, 0, 0, 0, 2};
  EXPECT_TRUE(ftt(f.params()).direct);
}

TEST(Ftt, OverflowIsReported) { EXPECT_THROW(ftt({0, 1.0, 0, -1.0, 10}), std::runtime_error); }

TEST(Kernels, M1DeterminantIsFirstMarginal) {
  const TwoTimeParams p{-0.4, 0.5, 0.3, 0, 0.4};
  const QParts q(assemble_kernels(p, {}));
  const Mat<double> id = Mat<double>::Identity(q.M1.rows(), q.M1.cols());
  EXPECT_NEAR((id - q.M1).determinant(), tracy_widom_f2(-0.4 + 0.25), 1e-8);
}

TEST(Kernels, SmallAlphaScaling) {
  const TwoTimeParams p{0, 0, 0, 0, 0.02};
  TwoTimeParams h = p;
  h.alpha = 0.01;
  const KernelSet a = assemble_kernels(p, {}), b = assemble_kernels(h, {});
  for (int j = 0; j < 5; ++j) {
    const double ratio = b.k[j].norm() / a.k[j].norm();
    EXPECT_GT(ratio, 0.35) << "k" << j + 1;
    EXPECT_LT(ratio, 0.65) << "k" << j + 1;
  }
}

TEST(AssembleQ, StructureAtOne) {
  const QParts q(assemble_kernels({0.1, 0.2, -0.3, 0.4, 0.6}, {}));
  const BlockOperator<cplx> b = assemble_Q(1.0, q);
  EXPECT_EQ(b.b[0][1].m.norm(), 0.0);
  EXPECT_EQ(b.b[1][1].m.norm(), 0.0);
  EXPECT_NEAR((b.b[1][0].m + q.k7.cast<cplx>()).norm(), 0, 1e-15);
}

TEST(AssembleQ, LaurentInU) {
  // every entry is a + b u + c / u
  const QParts q(assemble_kernels({0.1, 0.2, -0.3, 0.4, 0.6}, {}));
  const cplx us[] = {std::polar(2.0, 0.3), std::polar(2.0, 1.9), std::polar(2.0, 4.0)};
  Mat<cplx> V(3, 3);
  for (int i = 0; i < 3; ++i) V.row(i) << 1.0, us[i], 1.0 / us[i];
  const Eigen::PartialPivLU<Mat<cplx>> lu(V);
  const Mat<cplx> q0 = assemble_Q(us[0], q).assemble(), q1 = assemble_Q(us[1], q).assemble(),
                  q2 = assemble_Q(us[2], q).assemble();
  const cplx u4 = std::polar(2.0, 5.5);
  const Mat<cplx> q4 = assemble_Q(u4, q).assemble();
  double worst = 0;
  for (Eigen::Index i = 0; i < q0.rows(); i += 7)
    for (Eigen::Index j = 0; j < q0.cols(); j += 5) {
      Vec<cplx> rhs(3);
      rhs << q0(i, j), q1(i, j), q2(i, j);
      const Vec<cplx> c = lu.solve(rhs);
      worst = std::max(worst, std::abs(c[0] + c[1] * u4 + c[2] / u4 - q4(i, j)));
    }
  EXPECT_LT(worst, 1e-10);
}

TEST(AssembleQ, RejectsZero) {
  const QParts q(assemble_kernels({0, 0, 0, 0, 0.5}, {}));
  EXPECT_THROW(assemble_Q(0.0, q), std::invalid_argument);
}

TEST(SmallAlpha, ExtrapolatedGapVanishes) {
  const std::vector<cplx> us{std::polar(2.0, 0.4), std::polar(2.0, 2.2)};
  const SmallAlphaDeviation d = small_alpha_deviation({0, 0, 0, 0, 0.002}, us);
  EXPECT_LT(d.raw, 1e-2);
  EXPECT_LT(d.extrapolated, 1e-6);
}

TEST(LongTime, FitMatchesClosedForm) {
  const LongTimeFit f = long_time_fit({0, 0, 0, 0}, {0.02, 0.04, 0.06, 0.08, 0.1});
  EXPECT_LT(std::abs(f.e1_hat / f.e1 - 1), 1e-3);
  EXPECT_LT(std::abs(f.e2_hat / f.e2 - 1), 1e-2);
  EXPECT_NEAR(f.slope, 3, 0.3);
}

TEST(LongTime, RejectsBadAlphas) {
  EXPECT_THROW(long_time_fit({0, 0, 0, 0}, {0.02, 0.04, 0.06}), std::invalid_argument);
  EXPECT_THROW(long_time_fit({0, 0, 0, 0}, {0.02, 0.04, 0.06, 0.5}), std::invalid_argument);
}

TEST(ShortTime, GapDecreases) {
  double prev = INFINITY;
  for (double a : {5.0, 10.0, 20.0}) {
    const double g = short_time_check({0, 0, 0, 0, a}).gap();
    EXPECT_LT(g, prev) << "alpha=" << a;
    prev = g;
  }
}

TEST(ShortTime, EtaZeroRhsFactorsThroughBaikRains) {
  const ShortTimeCheck r = short_time_check({0.3, 0, -0.5, 0, 5});
  EXPECT_NEAR(r.rhs, f2_derivs(0.3).d1 * baik_rains_f0(-0.5), 1e-6);
}

TEST(ShortTime, LargeXiRhsTendsToDensity) {
  const ShortTimeCheck r = short_time_check({0.2, 0.3, 8, 0, 5});
  EXPECT_NEAR(r.rhs, f2_derivs(0.2 + 0.09).d1, 1e-6);
}

TEST(ShortTime, RejectsSmallAlpha) { EXPECT_THROW(short_time_check({0, 0, 0, 0, 2}), std::invalid_argument); }
