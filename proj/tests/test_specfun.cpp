#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "deltatrap/specfun.hpp"
#include "mp_faddeyeva.hpp"

namespace {

using deltatrap::specfun::cplx;
using deltatrap::specfun::faddeyeva;
using deltatrap::specfun::moshinsky;
using deltatrap::testing::reference_faddeyeva;

constexpr cplx kI{0.0, 1.0};

double rel_err(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

TEST(Faddeyeva, ValueAtOrigin) {
  EXPECT_EQ(faddeyeva(0.0), cplx(1.0, 0.0));
}

TEST(Faddeyeva, ImaginaryUnitMatchesErfcProduct) {
  // e * erfc(1)
  const cplx w = faddeyeva(kI);
  EXPECT_NEAR(w.real(), std::exp(1.0) * std::erfc(1.0), 1e-14);
  EXPECT_NEAR(w.real(), 0.42758358, 1e-8);
  EXPECT_EQ(w.imag(), 0.0);
}

TEST(Faddeyeva, UnitRealArgument) {
  const cplx w = faddeyeva(1.0);
  EXPECT_NEAR(w.real(), 0.36787944, 1e-8);
  EXPECT_NEAR(w.imag(), 0.60715770, 1e-8);
  EXPECT_LT(rel_err(w, reference_faddeyeva(1.0)), 1e-13);
}

TEST(Faddeyeva, MatchesReferenceAcrossRegions) {
  const cplx points[] = {{0.3, 0.2},  {0.9, -0.4}, {2.5, 0.01}, {-3.0, 1.5}, {6.9, 0.3},
                         {7.1, 0.3},  {0.0, 12.0}, {-9.5, -0.7}, {1e-3, 1e-3}, {4.0, -3.0},
                         {25.0, 5.0}, {-15.0, 0.0}};
  for (cplx z : points) {
    EXPECT_LT(rel_err(faddeyeva(z), reference_faddeyeva(z)), 1e-12) << "z = " << z;
  }
}

TEST(Faddeyeva, ReflectionIdentity) {
  for (double re = -30.0; re <= 30.0; re += 1.7) {
    for (double im = -30.0; im <= 30.0; im += 1.3) {
      const cplx z(re, im);
      if (std::abs(z) > 30.0) continue;
      // Keep exp(-z^2) representable; beyond that both sides saturate.
      if ((z * z).real() < -700.0) continue;
      const cplx lhs = faddeyeva(-z) + faddeyeva(z);
      const cplx rhs = 2.0 * std::exp(-z * z);
      EXPECT_LE(std::abs(lhs - rhs), 1e-10 * (1.0 + std::abs(faddeyeva(z))) + 1e-14 * std::abs(rhs))
          << "z = " << z;
    }
  }
}

TEST(Faddeyeva, ImaginaryAxisIsRealPositiveAndDecreasing) {
  double previous = 1.0;
  for (double y = 0.0; y <= 40.0; y += 0.05) {
    const cplx w = faddeyeva(cplx(0.0, y));
    EXPECT_EQ(w.imag(), 0.0) << "y = " << y;
    EXPECT_GT(w.real(), 0.0);
    EXPECT_LE(w.real(), previous);
    previous = w.real();
  }
}

TEST(Faddeyeva, DeepLowerHalfPlaneSaturatesWithoutNaN) {
  const cplx w = faddeyeva(cplx(0.0, -40.0));
  EXPECT_FALSE(std::isnan(w.real()));
  EXPECT_FALSE(std::isnan(w.imag()));
}

TEST(Faddeyeva, RejectsNonFinite) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(faddeyeva(cplx(nan, 0.0)), std::invalid_argument);
  EXPECT_THROW(faddeyeva(cplx(0.0, INFINITY)), std::invalid_argument);
}

TEST(Moshinsky, TrivialPoint) {
  const cplx m = moshinsky(0.0, 0.0, 1.0);
  EXPECT_NEAR(m.real(), 0.5, 1e-15);
  EXPECT_NEAR(m.imag(), 0.0, 1e-15);
}

TEST(Moshinsky, ComposesFromFaddeyevaReference) {
  // Kernel of the gamma = 0.7 free evolution.
  const cplx z = (1.0 + kI) / 2.0 * std::sqrt(2.0) * cplx(0.5, 0.35);
  const cplx want = std::exp(kI * 0.25) / 2.0 * reference_faddeyeva(z);
  EXPECT_LT(rel_err(moshinsky(1.0, cplx(0.0, -0.35), 2.0), want), 1e-13);
}

TEST(Moshinsky, PairSumIdentityInstance) {
  const double x = 1.3;
  const double t = 3.1;
  const cplx k(0.7, 0.2);
  const cplx sum = moshinsky(x, k, t) + moshinsky(-x, -k, t);
  const cplx want = std::exp(kI * k * x - kI * k * k * t / 2.0);
  EXPECT_LT(std::abs(sum - want), 1e-12 * std::abs(want));
}

TEST(Moshinsky, PairSumIdentityOverBox) {
  int checked = 0;
  for (double x = -20.0; x <= 20.0; x += 2.9) {
    for (double kr = -7.0; kr <= 7.0; kr += 1.9) {
      for (double ki = -7.0; ki <= 7.0; ki += 2.3) {
        const cplx k(kr, ki);
        if (std::abs(k) > 10.0) continue;
        for (double t : {1e-3, 0.04, 1.0, 17.0, 1e3}) {
          const cplx a = moshinsky(x, k, t);
          const cplx b = moshinsky(-x, -k, t);
          const cplx want = std::exp(kI * k * x - kI * k * k * t / 2.0);
          const double scale = std::max({std::abs(a), std::abs(b), std::abs(want)});
          if (!std::isfinite(scale)) continue;
          EXPECT_LE(std::abs(a + b - want), 1e-9 * scale)
              << "x=" << x << " k=" << k << " t=" << t;
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 500);
}

TEST(Moshinsky, LargeArgumentsStayFinite) {
  // exp(i x^2 / 2t) w(-z) overflows separately; the product does not.
  const cplx m = moshinsky(1.0, cplx(0.0, 10.0), 1e3);
  EXPECT_TRUE(std::isfinite(m.real()) && std::isfinite(m.imag()));
  const cplx n = moshinsky(20.0, cplx(-10.0, 0.0), 1e3);
  EXPECT_TRUE(std::isfinite(n.real()) && std::isfinite(n.imag()));
}

TEST(Moshinsky, RejectsNonPositiveTime) {
  EXPECT_THROW(moshinsky(1.0, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(moshinsky(1.0, 0.0, -2.0), std::invalid_argument);
}

}  // namespace
