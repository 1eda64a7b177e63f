#include <gtest/gtest.h>

#include <boost/math/special_functions/airy.hpp>
#include <cmath>

#include "kpztt/airy.hpp"

using namespace kpztt;

// mpmath, 30 digits
struct AiryRef {
  double x, ai, aip;
};
constexpr AiryRef kAiry[] = {
    {-5, 0.35076100902411431979, 0.32719281855444313679},
    {-2.5, -0.11232506769296608919, 0.67885273426479436337},
    {-1, 0.5355608832923521188, -0.010160567116645209395},
    {0, 0.35502805388781723926, -0.25881940379280679841},
    {0.5, 0.23169360648083348977, -0.22491053266468389314},
    {1, 0.13529241631288141552, -0.15914744129679321279},
    {3, 0.0065911393574607191443, -0.011912976705951318474},
    {6, 9.9476943602528895702e-6, -0.000024765200397034954754},
    {9, 2.4711684308724898433e-9, -7.4806413896589464128e-9},
    {12, 1.393184688875360839e-13, -4.854736554985308463e-13},
};

TEST(Airy, MatchesReferenceValues) {
  for (const auto& r : kAiry) {
    const AiryPair a = airy(r.x);
    const double scale = std::max(1e-300, std::abs(r.ai));
    EXPECT_NEAR(a.ai, r.ai, std::max(1e-12, 1e-10 * scale)) << "x=" << r.x;
    EXPECT_NEAR(a.aip, r.aip, std::max(1e-12, 1e-10 * std::abs(r.aip))) << "x=" << r.x;
  }
}

TEST(Airy, ZeroClosedForms) {
  EXPECT_NEAR(airy_ai(0), 1 / (std::cbrt(9.0) * std::tgamma(2.0 / 3)), 1e-12);
  EXPECT_NEAR(airy_aip(0), -1 / (std::cbrt(3.0) * std::tgamma(1.0 / 3)), 1e-12);
}

TEST(Airy, AgreesWithBoostOnDenseGrid) {
  for (double x = -10; x <= 10; x += 0.37) {
    const double ref = boost::math::airy_ai(x);
    EXPECT_NEAR(airy_ai(x), ref, 1e-10 * std::max(1.0, std::abs(ref))) << "x=" << x;
  }
}

TEST(Airy, PositiveOnRightAxis) {
  for (double x = 0; x <= 20; x += 0.25) EXPECT_GT(airy_ai(x), 0) << "x=" << x;
}

TEST(Airy, ContourFormulaMatchesDirect) {
  const double ci = contour_integral(vertical_rule(1.0), [](cplx z) { return g_weight(1.0, 0, z); }).real();
  EXPECT_NEAR(ci, airy_ai(1.0), 1e-10);
}

TEST(ShiftedAiry, EtaZeroIsPlainAiry) {
  for (double v : {0.0, 0.5, 2.0}) {
    EXPECT_DOUBLE_EQ(a_func({0.3, 0}, +1, v), airy_ai(0.3 + v));
    EXPECT_DOUBLE_EQ(a_func({0.3, 0}, -1, v), airy_ai(0.3 + v));
  }
}

TEST(ShiftedAiry, TiltsCancelInProduct) {
  const ShiftParams p{-0.4, 0.7};
  for (double v : {0.0, 1.0, 3.0}) {
    const double a = airy_ai(p.xi + p.eta * p.eta + v);
    EXPECT_NEAR(a_func(p, +1, v) * a_func(p, -1, v), a * a, 1e-14);
  }
}

TEST(ShiftedAiry, ContourCheck) {
  const ShiftParams p{0.2, 0.5};
  for (double v : {0.0, 0.7}) {
    const double ci = contour_integral(vertical_rule(1.0), [&](cplx z) { return g_weight(p.xi + v, p.eta, z); }).real();
    EXPECT_NEAR(ci, a_func(p, +1, v), 1e-9);
  }
}

TEST(Deriv, FirstDerivativeAtZero) {
  EXPECT_NEAR(a_deriv({0, 0}, +1, 1, 0), 0.25881940379280679841, 1e-9);
  EXPECT_NEAR(a_deriv1({0, 0}, -1, 0), 0.25881940379280679841, 1e-12);
}

TEST(Deriv, ZeroOrderIsFunction) {
  EXPECT_DOUBLE_EQ(a_deriv({0.1, 0.3}, -1, 0, 0.4), a_func({0.1, 0.3}, -1, 0.4));
}

TEST(Deriv, ContourMatchesClosedFormBothSigns) {
  for (double eta : {-0.5, 0.0, 0.5})
    for (int sign : {1, -1}) {
      const ShiftParams p{0.3, eta};
      EXPECT_NEAR(a_deriv(p, sign, 1, 0.2), a_deriv1(p, sign, 0.2), 1e-9) << eta << " " << sign;
    }
}

TEST(Deriv, SecondDerivativeFromAiryEquation) {
  // A'' = (x + v) A for eta = 0
  const ShiftParams p{0.5, 0};
  EXPECT_NEAR(a_deriv(p, +1, 2, 0.25), 0.75 * airy_ai(0.75), 1e-9);
}

TEST(GWeight, Identities) {
  const cplx z(0.3, -0.8);
  EXPECT_NEAR(std::abs(g_weight(0.4, 0.6, 0) - 1.0), 0, 1e-15);
  EXPECT_NEAR(std::abs(g_weight(0.4, 0.6, z) * g_weight(0.4, 0.6, -z) - std::exp(2 * 0.6 * z * z)), 0, 1e-13);
  const double c = 1.2, t = 0.9, xi = 0.4, eta = 0.6;
  EXPECT_NEAR(std::abs(g_weight(xi, eta, cplx(c, t))), std::exp(c * c * c / 3 - c * t * t + eta * (c * c - t * t) - xi * c),
              1e-13);
}

TEST(Antideriv, ExponentialIsFixed) {
  const HalfLineRule r = half_line_rule(60, 20);
  for (int k = 1; k <= 3; ++k) EXPECT_NEAR(antideriv([](double x) { return std::exp(-x); }, k, 0.5, r), std::exp(-0.5), 1e-11);
}

TEST(Antideriv, AiryFirstIsOneThird) {
  EXPECT_NEAR(antideriv([](double x) { return airy_ai(x); }, 1, 0, half_line_rule(48)), 1.0 / 3, 1e-10);
}

TEST(Antideriv, DerivativeRecoversMinusFunction) {
  const HalfLineRule r = half_line_rule(48);
  auto F = [&](double v) { return antideriv([](double x) { return airy_ai(x); }, 1, v, r); };
  const double h = 1e-4;
  EXPECT_NEAR((F(0.5 + h) - F(0.5 - h)) / (2 * h), -airy_ai(0.5), 1e-7);
}
