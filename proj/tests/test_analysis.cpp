#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "deltatrap/analysis.hpp"
#include "deltatrap/analytic.hpp"
#include "deltatrap/oracle.hpp"

namespace {

namespace al = deltatrap::analysis;
namespace an = deltatrap::analytic;
namespace o = deltatrap::oracle;
using al::cplx;
constexpr double kPi = std::numbers::pi;

std::vector<double> sample(const std::vector<double>& t, double (*f)(double)) {
  std::vector<double> y;
  for (double s : t) y.push_back(f(s));
  return y;
}

TEST(InterpolateDensity, ExactForCubicDensity) {
  const o::GridSpec g{0.0, 2.0, 41, 0.01};
  auto cubic = [](double x) { return 1.0 + x + x * x + 0.1 * x * x * x; };
  const auto f = o::sample_field(g, 0.0, [&](double x) { return std::sqrt(cubic(x)); });
  for (double x : {0.0, 0.013, 0.77, 1.2345, 1.999, 2.0}) {
    EXPECT_NEAR(al::interpolate_density(f, x), cubic(x), 1e-12) << x;
  }
  EXPECT_THROW(al::interpolate_density(f, -0.01), std::out_of_range);
  EXPECT_THROW(al::interpolate_density(f, 2.01), std::out_of_range);
}

TEST(UniformTimes, ExcludesEndpoint) {
  const auto t = al::uniform_times(8.0, 4);
  EXPECT_EQ(t, (std::vector<double>{0.0, 2.0, 4.0, 6.0}));
}

TEST(TrackPeaks, RidingEigenstateHasConstantWellDensity) {
  const an::WellParams p(1.3, 0.8);
  const al::SampledTrajectory traj(al::uniform_times(5.0, 50), [p](double x, double t) {
    return an::moving_bound_eigenstate({x, t}, p);
  });
  const auto trace = al::track_peaks(traj, p);
  ASSERT_EQ(trace.times.size(), 50u);
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    EXPECT_NEAR(trace.dv[i], 0.5 * p.gamma(), 1e-14);
    const double vt = p.v() * trace.times[i];
    EXPECT_NEAR(trace.d0[i], 0.5 * p.gamma() * std::exp(-p.gamma() * vt), 1e-14);
    EXPECT_NEAR(trace.d2v[i], 0.5 * p.gamma() * std::exp(-p.gamma() * vt), 1e-14);
  }
}

TEST(TrackPeaks, ClosedFormTrajectoryStartsFromBoundState) {
  const an::WellParams p(0.7, 1.5);
  const auto trace = al::track_peaks(al::closed_form_trajectory({0.0, 0.5}, p), p);
  EXPECT_DOUBLE_EQ(trace.d0[0], 0.35);
  EXPECT_DOUBLE_EQ(trace.dv[0], 0.35);
  EXPECT_DOUBLE_EQ(trace.d2v[0], 0.35);
}

TEST(TrackPeaks, SnapshotAndSampledTrajectoriesAgree) {
  const an::WellParams p(1.0, 0.5);
  const o::GridSpec g{-20.0, 20.0, 4001, 0.01};
  std::vector<o::WavefunctionField> snaps;
  std::vector<double> times{0.2, 0.6, 1.0};
  for (double t : times) {
    snaps.push_back(o::sample_field(g, t, [&](double x) { return an::moving_bound_eigenstate({x, t}, p); }));
  }
  const auto a = al::track_peaks(al::SnapshotTrajectory(snaps), p);
  const auto b = al::track_peaks(al::SampledTrajectory(times, [p](double x, double t) {
    return an::moving_bound_eigenstate({x, t}, p);
  }), p);
  for (std::size_t i = 0; i < times.size(); ++i) {
    EXPECT_NEAR(a.d0[i], b.d0[i], 1e-6);
    EXPECT_NEAR(a.d2v[i], b.d2v[i], 1e-6);
  }
}

TEST(TrackPeaks, RejectsNonIncreasingTimes) {
  const an::WellParams p(1.0, 1.0);
  EXPECT_THROW(al::track_peaks(al::closed_form_trajectory({0.0, 0.5, 0.5}, p), p), std::invalid_argument);
}

TEST(PowerLaw, RecoversExactLaw) {
  std::vector<double> t, y;
  for (int i = 1; i <= 40; ++i) {
    t.push_back(0.05 * i);
    y.push_back(3.0 * std::pow(t.back(), -0.5));
  }
  const auto fit = al::fit_power_law(t, y, 0.2, 1.0, false);
  EXPECT_NEAR(fit.exponent, -0.5, 1e-12);
  EXPECT_NEAR(fit.prefactor, 3.0, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_FALSE(fit.used_envelope);
}

TEST(PowerLaw, EnvelopeFollowsOscillatingDecay) {
  const auto t = al::uniform_times(2.0, 4000);
  auto f = [](double s) { return (1.2 + std::cos(2.0 * kPi * 40.0 * s)) / s; };
  std::vector<double> y;
  for (double s : t) y.push_back(s > 0.0 ? f(s) : 1.0);
  const auto env = al::fit_power_law(t, y, 0.2, 1.0, true);
  EXPECT_TRUE(env.used_envelope);
  EXPECT_NEAR(env.exponent, -1.0, 0.01);
}

TEST(PowerLaw, EnvelopeFallsBackWithFewMaxima) {
  std::vector<double> t, y;
  for (int i = 1; i <= 40; ++i) {
    t.push_back(0.05 * i);
    y.push_back(1.0 / t.back());
  }
  const auto fit = al::fit_power_law(t, y, 0.2, 1.0, true);
  EXPECT_FALSE(fit.used_envelope);
  EXPECT_NEAR(fit.exponent, -1.0, 1e-12);
}

TEST(PowerLaw, RejectsBadInput) {
  std::vector<double> t{0.2, 0.3, 0.4};
  std::vector<double> y{1.0, 1.0, 1.0};
  EXPECT_THROW(al::fit_power_law(t, y, 0.2, 1.0, false), std::invalid_argument);
  std::vector<double> t2, y2;
  for (int i = 1; i <= 20; ++i) {
    t2.push_back(0.05 * i);
    y2.push_back(i == 10 ? 0.0 : 1.0);
  }
  EXPECT_THROW(al::fit_power_law(t2, y2, 0.0, 1.0, false), std::invalid_argument);
}

TEST(Spectrum, PureCosinePeaksAtItsFrequency) {
  const auto t = al::uniform_times(10.0, 1000);
  const auto y = sample(t, [](double s) { return std::cos(2.0 * kPi * 5.0 * s); });
  const auto s = al::spectrum(t, y, 5.0);
  EXPECT_NEAR(s.df, 0.1, 1e-12);
  const auto top = std::max_element(s.mags.begin(), s.mags.end()) - s.mags.begin();
  EXPECT_NEAR(s.freqs[static_cast<std::size_t>(top)], 5.0, s.df);
  EXPECT_LT(s.parseval_error, 1e-12);
  EXPECT_NEAR(al::dominant_frequency(s, 0.0), 5.0, s.df);
}

TEST(Spectrum, MeanIsRemoved) {
  const auto t = al::uniform_times(10.0, 1000);
  const auto y = sample(t, [](double s) { return 7.0 + std::cos(2.0 * kPi * 3.0 * s); });
  const auto s = al::spectrum(t, y, 3.0);
  EXPECT_LT(s.mags[0], 1e-9 * *std::max_element(s.mags.begin(), s.mags.end()));
}

TEST(Spectrum, RejectsBadSampling) {
  const auto few = al::uniform_times(1.0, 32);
  EXPECT_THROW(al::spectrum(few, std::vector<double>(32, 1.0), 1.0), std::invalid_argument);
  auto t = al::uniform_times(1.0, 128);
  const std::vector<double> y(128, 1.0);
  EXPECT_THROW(al::spectrum(t, y, 64.0), std::invalid_argument);
  t[5] += 1e-4;
  EXPECT_THROW(al::spectrum(t, y, 1.0), std::invalid_argument);
}

TEST(Spectrum, SyntheticWellTraceIsLabelled) {
  const an::WellParams p(10.0, 20.0);
  const auto f = an::characteristic_frequencies(p);
  const auto t = al::uniform_times(8.0, 2048);
  std::vector<double> y;
  for (double s : t) {
    y.push_back(1.0 + 0.3 * std::cos(2.0 * kPi * f.f1 * s) + 0.2 * std::cos(2.0 * kPi * f.f3 * s) +
                0.1 * std::cos(2.0 * kPi * f.f4 * s));
  }
  const auto s = al::spectrum(t, y, p);
  const auto labels = al::identify_spectral_peaks(s, p, al::TraceKind::dv);
  for (char c : {'A', 'B', 'C'}) {
    ASSERT_EQ(labels.at(c).status, al::PeakStatus::present) << c;
    EXPECT_NEAR(labels.at(c).frequency, labels.at(c).expected, 2.0 * s.df) << c;
  }
  EXPECT_EQ(labels.count('D'), 0u);
  EXPECT_EQ(labels.count('E'), 0u);
}

TEST(Labels, PermutationStable) {
  const an::WellParams p(10.0, 20.0);
  const auto f = an::characteristic_frequencies(p);
  const double df = 0.125;
  std::vector<al::DetectedPeak> maxima{{f.f1 - 0.1, 1.0}, {f.f1 + 0.1, 1.0}, {f.f3, 0.5},
                                       {f.f4 + 0.2, 0.3}, {f.f4 - 0.2, 0.4}, {f.f2, 2.0}};
  const auto reference = al::assign_labels(maxima, df, p, al::TraceKind::d0);
  std::mt19937 rng(7);
  for (int k = 0; k < 20; ++k) {
    std::shuffle(maxima.begin(), maxima.end(), rng);
    const auto labels = al::assign_labels(maxima, df, p, al::TraceKind::d0);
    for (const auto& [c, peak] : reference) {
      EXPECT_EQ(labels.at(c).frequency, peak.frequency) << c;
      EXPECT_EQ(labels.at(c).status, peak.status) << c;
    }
  }
  EXPECT_DOUBLE_EQ(reference.at('A').frequency, f.f1 - 0.1);
  EXPECT_DOUBLE_EQ(reference.at('C').frequency, f.f4 - 0.2);
  EXPECT_EQ(reference.at('D').status, al::PeakStatus::present);
}

TEST(Labels, DegenerateFrequencyMergesWithDc) {
  const an::WellParams p(2.0, 2.0);
  const auto labels = al::assign_labels({}, 0.01, p, al::TraceKind::dv);
  EXPECT_EQ(labels.at('B').status, al::PeakStatus::merged_with_dc);
  EXPECT_EQ(labels.at('A').status, al::PeakStatus::absent);
}

TEST(Labels, RejectsCoarseResolution) {
  const an::WellParams p(10.0, 20.0);
  EXPECT_THROW(al::assign_labels({}, 1.5, p, al::TraceKind::dv), std::invalid_argument);
}

TEST(DetectMaxima, IgnoresTinyRipples) {
  al::SpectrumResult s;
  s.df = 1.0;
  s.freqs = {0, 1, 2, 3, 4, 5, 6};
  s.mags = {0.0, 1.0, 0.0, 5e-4, 0.0, 0.5, 0.0};
  const auto m = al::detect_maxima(s);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].frequency, 1.0);
  EXPECT_EQ(m[1].frequency, 5.0);
}

}  // namespace
