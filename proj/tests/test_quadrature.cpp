#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "deltatrap/quadrature.hpp"

namespace {

namespace q = deltatrap::quadrature;
using q::cplx;

constexpr cplx kI{0.0, 1.0};

TEST(Quadrature, PolynomialIsExact) {
  const auto r = q::integrate_real([](double x) { return x * x * x - 2.0 * x; }, 0.0, 2.0, {}, 1);
  EXPECT_NEAR(r.value.real(), 0.0, 1e-14);
  EXPECT_TRUE(r.converged);
}

TEST(Quadrature, KinkedIntegrandNeedsBreakpoint) {
  const std::array<double, 1> kink{0.3};
  const auto r = q::integrate_decaying_line(
      [](double x) { return cplx(std::exp(-2.0 * std::abs(x - 0.3)), 0.0); }, kink, 0.5, {});
  EXPECT_NEAR(r.value.real(), 1.0, 1e-10);
}

TEST(Quadrature, FresnelIntegralByContourRotation) {
  // int exp(i x^2) dx = sqrt(pi) exp(i pi / 4)
  const std::array<double, 1> saddle{0.0};
  const q::ContourIntegrand f = [](cplx x, double) { return std::exp(kI * x * x); };
  const auto r = q::integrate_oscillatory_line(f, saddle, 1.0, {});
  const cplx want = std::sqrt(std::numbers::pi) * std::exp(kI * std::numbers::pi / 4.0);
  EXPECT_LT(std::abs(r.value - want), 1e-10);
}

TEST(Quadrature, ShiftedGaussianChirpWithKinkedEnvelope) {
  // int exp(i (x - 3)^2 / 4) exp(-|x|) dx checked against a brute-force
  // real-axis integral truncated where exp(-|x|) is negligible.
  const std::array<double, 2> breaks{0.0, 3.0};
  const q::ContourIntegrand f = [](cplx x, double anchor) {
    const cplx ax = q::branch_abs(x, 0.0, anchor);
    return std::exp(kI * (x - 3.0) * (x - 3.0) / 4.0 - ax);
  };
  const auto r = q::integrate_oscillatory_line(f, breaks, 0.25, {});
  q::Options tight;
  tight.abs_tol = 1e-13;
  const q::ContourIntegrand g = [](cplx x, double) {
    return std::exp(kI * (x - 3.0) * (x - 3.0) / 4.0 - std::abs(x.real()));
  };
  const cplx brute = q::integrate_segment(g, -45.0, 0.0, -1.0, tight, 64).value +
                     q::integrate_segment(g, 0.0, 45.0, 1.0, tight, 64).value;
  EXPECT_LT(std::abs(r.value - brute), 1e-9);
}

TEST(Quadrature, ReportsNonConvergence) {
  q::Options opts;
  opts.max_intervals = 4;
  EXPECT_THROW(q::integrate_real([](double x) { return 1.0 / std::sqrt(std::abs(x)); }, -1.0, 1.0,
                                 opts, 1),
               q::QuadratureError);
}

TEST(Quadrature, BranchAbsFollowsAnchor) {
  EXPECT_EQ(q::branch_abs(cplx(-0.5, 1.0), 0.0, 1.0), cplx(-0.5, 1.0));
  EXPECT_EQ(q::branch_abs(cplx(-0.5, 1.0), 0.0, -1.0), cplx(0.5, -1.0));
}

}  // namespace
