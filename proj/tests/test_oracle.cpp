#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "deltatrap/analytic.hpp"
#include "deltatrap/oracle.hpp"

namespace {

namespace o = deltatrap::oracle;
namespace a = deltatrap::analytic;
using o::cplx;

constexpr cplx kI{0.0, 1.0};

o::GridSpec grid(double lo, double hi, std::size_t n, double dt) { return {lo, hi, n, dt}; }

TEST(GridSpec, Validation) {
  EXPECT_NO_THROW(grid(-1.0, 1.0, 201, 0.01).validate());
  EXPECT_THROW(grid(-1.0, 1.0, 2, 0.01).validate(), std::invalid_argument);
  EXPECT_THROW(grid(1.0, -1.0, 201, 0.01).validate(), std::invalid_argument);
  EXPECT_THROW(grid(-1.0, 1.0, 201, 0.0).validate(), std::invalid_argument);
  EXPECT_THROW(grid(-1.0, 1.0, 201, 0.02).validate(), std::invalid_argument);
}

TEST(DeltaModel, IntegratedStrength) {
  const o::DeltaModel m(0.01, 1.0);
  const auto g = grid(-10.0, 10.0, 4001, 0.005);
  for (double c : {0.0, 0.00123, -3.3}) {
    EXPECT_NEAR(m.integrated_strength(g, c), -1.0, 1e-10);
  }
}

TEST(DeltaModel, ResolutionLimits) {
  const auto g = grid(-10.0, 10.0, 4001, 0.005);
  EXPECT_NO_THROW(o::DeltaModel(0.01, 1.0).validate_on(g));
  EXPECT_THROW(o::DeltaModel(0.009, 1.0).validate_on(g), std::invalid_argument);
  EXPECT_THROW(o::DeltaModel(0.2, 1.0).validate_on(g), std::invalid_argument);
}

TEST(Overlap, SelfOverlapIsSquaredNorm) {
  const auto g = grid(-5.0, 5.0, 1001, 0.01);
  const auto f = o::sample_field(g, 0.0, [](double x) { return std::exp(-x * x + kI * x); });
  const cplx s = o::overlap(f, f);
  EXPECT_NEAR(s.real(), o::norm(f) * o::norm(f), 1e-14);
  EXPECT_NEAR(s.imag(), 0.0, 1e-15);
}

TEST(Overlap, EvenAndOddAreOrthogonal) {
  const auto g = grid(-5.0, 5.0, 1001, 0.01);
  const auto even = o::sample_field(g, 0.0, [](double x) { return std::exp(-x * x); });
  const auto odd = o::sample_field(g, 0.0, [](double x) { return x * std::exp(-x * x); });
  EXPECT_LT(std::abs(o::overlap(even, odd)), 1e-12);
}

TEST(Overlap, RejectsGridMismatch) {
  const auto f = o::sample_field(grid(-5.0, 5.0, 101, 0.1), 0.0, [](double) { return 1.0; });
  const auto h = o::sample_field(grid(-5.0, 5.0, 103, 0.1), 0.0, [](double) { return 1.0; });
  EXPECT_THROW(o::overlap(f, h), std::invalid_argument);
}

TEST(Overlap, SurvivalFractionAtThetaTwo) {
  const a::WellParams p(1.0, 2.0);
  const auto g = grid(-40.0, 40.0, 80001, 0.001);
  const auto psi = o::sample_field(g, 0.0, [&](double x) { return a::initial_bound_state(x, p); });
  const auto riding = o::sample_field(g, 0.0, [&](double x) { return a::moving_bound_eigenstate({x, 0.0}, p); });
  EXPECT_NEAR(std::norm(o::overlap(riding, psi)), 16.0 / 64.0, 1e-6);
}

TEST(GroundState, SampledIsNormalized) {
  const auto g = grid(-40.0, 40.0, 4096, 0.01);
  const auto gs = o::ground_state_on_grid(g, o::DeltaModel(0.1, 1.0));
  EXPECT_NEAR(o::norm(gs.field), 1.0, 1e-10);
}

TEST(GroundState, RelaxedMatchesPointWellState) {
  const a::WellParams p(1.0, 0.0);
  const auto g = grid(-40.0, 40.0, 16001, 0.005);
  const auto model = o::default_model(p);
  const auto sampled = o::ground_state_on_grid(g, model, o::GroundStateMethod::sampled);
  const auto relaxed = o::ground_state_on_grid(g, model, o::GroundStateMethod::relaxed);
  EXPECT_NEAR(o::norm(relaxed.field), 1.0, 1e-10);
  EXPECT_GE(std::norm(o::overlap(sampled.field, relaxed.field)), 0.999);
  EXPECT_LT(relaxed.residual, 1e-6);
}

TEST(GroundState, EnergyWithinOnePercentOfPointWell) {
  const a::WellParams p(1.0, 0.0);
  const auto g = grid(-40.0, 40.0, 16001, 0.005);
  const auto relaxed = o::ground_state_on_grid(g, o::DeltaModel(0.01, 1.0), o::GroundStateMethod::relaxed);
  EXPECT_NEAR(relaxed.energy, -0.25, 0.01 * 0.25);
}

TEST(GroundState, EnergyShiftMatchesFirstOrderSmearing) {
  // <psi| V_sigma - V_delta |psi> = (gamma^2 / 2) (1 - E exp(-gamma |X|)),
  // X ~ N(0, sigma^2), which is gamma^2 sigma sqrt(2/pi) / 2 to leading order.
  const double sigma = 0.01;
  const auto g = grid(-40.0, 40.0, 32001, 0.0025);
  const auto sampled = o::ground_state_on_grid(g, o::DeltaModel(sigma, 1.0));
  const double shift = 0.5 * sigma * std::sqrt(2.0 / std::numbers::pi);
  EXPECT_NEAR(sampled.energy, -0.25 + shift, 2e-4);
}

TEST(Step, FreeGaussianKeepsNorm) {
  const auto g = grid(-30.0, 30.0, 6001, 0.01);
  auto f = o::sample_field(g, 0.0, [](double x) {
    return std::pow(2.0 / std::numbers::pi, 0.25) * std::exp(-x * x + 2.0 * kI * x);
  });
  o::CrankNicolson stepper(g, o::DeltaModel(0.05, 0.0), a::WellParams(1.0, 0.0));
  double previous = o::norm(f);
  for (int s = 0; s < 200; ++s) {
    stepper.step(f);
    const double n = o::norm(f);
    EXPECT_LE(std::abs(n - previous), 1e-12);
    previous = n;
  }
}

TEST(Step, StaticWellHoldsBoundState) {
  const a::WellParams p(1.0, 0.0);
  const auto model = o::default_model(p);
  const auto g = grid(-40.0, 40.0, 16001, 0.005);
  const auto start = o::ground_state_on_grid(g, model).field;
  auto f = start;
  o::CrankNicolson stepper(g, model, p);
  for (int s = 0; s < 1000; ++s) stepper.step(f);
  EXPECT_GE(std::norm(o::overlap(start, f)), 0.9999);
}

TEST(Step, RejectsWellLeavingGrid) {
  const a::WellParams p(1.0, 1.0);
  const auto g = grid(-2.0, 2.0, 801, 0.005);
  auto f = o::sample_field(g, 1.98, [](double) { return 0.0; });
  o::CrankNicolson stepper(g, o::DeltaModel(0.01, 1.0), p);
  EXPECT_THROW(stepper.step(f), std::invalid_argument);
}

TEST(Step, MatchesSingleStepHelper) {
  const a::WellParams p(1.0, 0.7);
  const auto model = o::default_model(p);
  const auto g = grid(-20.0, 20.0, 8001, 0.005);
  auto f = o::ground_state_on_grid(g, model).field;
  const auto once = o::step_crank_nicolson(f, model, p);
  o::CrankNicolson(g, model, p).step(f);
  EXPECT_EQ(once.values, f.values);
  EXPECT_DOUBLE_EQ(once.t, 0.005);
}

TEST(Evolve, ZeroDurationReturnsInitial) {
  const a::WellParams p(1.0, 1.0);
  const auto model = o::default_model(p);
  const auto g = o::auto_grid(p, model, 0.0);
  const auto start = o::ground_state_on_grid(g, model).field;
  const auto snaps = o::evolve(start, model, p, 0.0, 10);
  ASSERT_EQ(snaps.size(), 1u);
  EXPECT_EQ(snaps[0].values, start.values);
  EXPECT_EQ(snaps[0].t, 0.0);
}

TEST(Evolve, SnapshotsAreMonotoneAndNormPreserving) {
  const a::WellParams p(1.0, 1.0);
  const auto model = o::default_model(p);
  const auto g = o::auto_grid(p, model, 1.0);
  const auto start = o::ground_state_on_grid(g, model).field;
  std::size_t steps_seen = 0;
  double last_t = -1.0;
  o::evolve(start, model, p, 1.0, 25, [&](const o::WavefunctionField& f) {
    EXPECT_GT(f.t, last_t);
    const double k = std::round(f.t / g.dt);
    EXPECT_LE(std::abs(o::norm(f) * o::norm(f) - 1.0), 1e-9 * std::max(k, 1.0));
    EXPECT_NO_THROW(o::check_field(f));
    last_t = f.t;
    ++steps_seen;
  });
  EXPECT_DOUBLE_EQ(last_t, 1.0);
  EXPECT_GE(steps_seen, 3u);
}

TEST(Evolve, ReportsFailingTime) {
  const a::WellParams p(1.0, 1.0);
  const auto model = o::default_model(p);
  const auto g = grid(-2.0, 2.0, 801, 0.005);
  const auto start = o::sample_field(g, 0.0, [&](double x) { return a::initial_bound_state(x, p); });
  try {
    o::evolve(start, model, p, 5.0, 1);
    FAIL() << "expected the well to leave the grid";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("t = 1.9"), std::string::npos) << e.what();
  }
}

TEST(AutoGrid, CoversBothRemnantAndDoublePeak) {
  const a::WellParams p(0.7, 1.5);
  const auto model = o::default_model(p);
  const auto g = o::auto_grid(p, model, 6.0);
  EXPECT_LE(g.x_min, -40.0 / 0.7 - 18.0);
  EXPECT_GE(g.x_max, 18.0 + 40.0 / 0.7);
  EXPECT_LE(g.dx(), 0.5 * model.width() * (1.0 + 1e-12));
  EXPECT_NO_THROW(g.validate());
  EXPECT_NO_THROW(model.validate_on(g));
}

}  // namespace
