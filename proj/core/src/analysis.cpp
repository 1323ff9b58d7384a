#include "deltatrap/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace deltatrap::analysis {
namespace {

// FFTW planning touches global state.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<cplx> real_dft(const std::vector<double>& in) {
  const int n = static_cast<int>(in.size());
  std::vector<double> buffer(in);
  std::vector<cplx> out(in.size() / 2 + 1);
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(n, buffer.data(), dst, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw std::runtime_error("spectrum: FFTW planning failed");
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

double interpolate_density(const oracle::WavefunctionField& f, double x) {
  const auto& g = f.grid;
  if (!(x >= g.x_min && x <= g.x_max)) {
    throw std::out_of_range("interpolate_density: point outside the grid");
  }
  const double dx = g.dx();
  const double u = (x - g.x_min) / dx;
  const auto last_start = static_cast<std::ptrdiff_t>(g.n_points) - 4;
  const auto start = std::clamp(static_cast<std::ptrdiff_t>(std::floor(u)) - 1,
                                std::ptrdiff_t{0}, last_start);
  double sum = 0.0;
  for (int a = 0; a < 4; ++a) {
    double weight = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (b != a) weight *= (u - static_cast<double>(start + b)) / static_cast<double>(a - b);
    }
    sum += weight * std::norm(f.values[static_cast<std::size_t>(start + a)]);
  }
  return std::max(sum, 0.0);
}

SnapshotTrajectory::SnapshotTrajectory(std::vector<oracle::WavefunctionField> snapshots)
    : snapshots_(std::move(snapshots)) {
  for (const auto& s : snapshots_) {
    if (s.grid.n_points < 4) throw std::invalid_argument("SnapshotTrajectory: grid too small");
  }
}

double SnapshotTrajectory::density(std::size_t i, double x) const {
  return interpolate_density(snapshots_.at(i), x);
}

SampledTrajectory::SampledTrajectory(std::vector<double> times,
                                     std::function<cplx(double, double)> psi)
    : times_(std::move(times)), psi_(std::move(psi)) {}

double SampledTrajectory::density(std::size_t i, double x) const {
  return std::norm(psi_(x, times_.at(i)));
}

SampledTrajectory closed_form_trajectory(std::vector<double> times, const WellParams& p) {
  return {std::move(times), [p](double x, double t) -> cplx {
            if (t == 0.0) return analytic::initial_bound_state(x, p);
            return analytic::exact_wavefunction_closed({x, t}, p);
          }};
}

std::vector<double> uniform_times(double duration, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) {
    t[k] = duration * static_cast<double>(k) / static_cast<double>(n);
  }
  return t;
}

PeakTrace track_peaks(const Trajectory& trajectory, const WellParams& p) {
  PeakTrace out;
  const std::size_t n = trajectory.size();
  out.times.reserve(n);
  out.d0.reserve(n);
  out.dv.reserve(n);
  out.d2v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = trajectory.time(i);
    if (i > 0 && !(t > out.times.back())) {
      throw std::invalid_argument("track_peaks: times must be strictly increasing");
    }
    const double vt = p.v() * t;
    out.times.push_back(t);
    out.d0.push_back(trajectory.density(i, 0.0));
    out.dv.push_back(trajectory.density(i, vt));
    out.d2v.push_back(trajectory.density(i, 2.0 * vt));
  }
  return out;
}

PowerLawFit fit_power_law(std::span<const double> times, std::span<const double> values,
                          double t_lo, double t_hi, bool envelope) {
  if (times.size() != values.size()) {
    throw std::invalid_argument("fit_power_law: times and values differ in length");
  }
  std::vector<std::size_t> window;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= t_lo && times[i] <= t_hi) window.push_back(i);
  }
  if (window.size() < 8) throw std::invalid_argument("fit_power_law: fewer than 8 samples in window");
  for (std::size_t i : window) {
    if (!(values[i] > 0.0) || !(times[i] > 0.0)) {
      throw std::invalid_argument("fit_power_law: values and times must be positive");
    }
  }

  PowerLawFit fit;
  std::vector<std::size_t> chosen = window;
  if (envelope) {
    std::vector<std::size_t> maxima;
    for (std::size_t k = 1; k + 1 < window.size(); ++k) {
      const std::size_t i = window[k];
      if (values[i] > values[i - 1] && values[i] >= values[i + 1]) maxima.push_back(i);
    }
    if (maxima.size() >= 8) {
      chosen = std::move(maxima);
      fit.used_envelope = true;
    }
  }

  const double n = static_cast<double>(chosen.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i : chosen) {
    sx += std::log(times[i]);
    sy += std::log(values[i]);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i : chosen) {
    const double dx = std::log(times[i]) - mx;
    const double dy = std::log(values[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_power_law: window spans a single time");
  fit.exponent = sxy / sxx;
  fit.prefactor = std::exp(my - fit.exponent * mx);
  double ss_res = 0.0;
  for (std::size_t i : chosen) {
    const double r = std::log(values[i]) - (my + fit.exponent * (std::log(times[i]) - mx));
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.samples = chosen.size();
  return fit;
}

SpectrumResult spectrum(std::span<const double> times, std::span<const double> values,
                        double max_frequency) {
  const std::size_t n = times.size();
  if (values.size() != n) throw std::invalid_argument("spectrum: times and values differ in length");
  if (n < 64) throw std::invalid_argument("spectrum: need at least 64 samples");
  const double dt = (times[n - 1] - times[0]) / static_cast<double>(n - 1);
  if (!(dt > 0.0)) throw std::invalid_argument("spectrum: times must increase");
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(times[i] - times[i - 1] - dt) > 1e-9 * dt) {
      throw std::invalid_argument("spectrum: sampling is not uniform");
    }
  }
  if (!(1.0 / dt > 2.0 * max_frequency)) {
    throw std::invalid_argument("spectrum: sampling rate does not exceed twice the highest frequency");
  }

  double mean = 0.0;
  for (double y : values) mean += y;
  mean /= static_cast<double>(n);
  std::vector<double> windowed(n);
  double energy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double hann =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    windowed[i] = (values[i] - mean) * hann;
    energy += windowed[i] * windowed[i];
  }

  const auto bins = real_dft(windowed);
  SpectrumResult s;
  s.df = 1.0 / (static_cast<double>(n) * dt);
  s.freqs.resize(bins.size());
  s.mags.resize(bins.size());
  double spectral = 0.0;
  for (std::size_t k = 0; k < bins.size(); ++k) {
    s.freqs[k] = static_cast<double>(k) * s.df;
    s.mags[k] = std::abs(bins[k]);
    // One-sided spectrum: interior bins stand for a +-k pair.
    const bool paired = k != 0 && !(n % 2 == 0 && k == n / 2);
    spectral += (paired ? 2.0 : 1.0) * std::norm(bins[k]);
  }
  spectral /= static_cast<double>(n);
  s.parseval_error = energy > 0.0 ? std::abs(spectral - energy) / energy : std::abs(spectral);
  return s;
}

SpectrumResult spectrum(std::span<const double> times, std::span<const double> values,
                        const WellParams& p) {
  const auto f = analytic::characteristic_frequencies(p);
  return spectrum(times, values, std::max({f.f1, f.f2, f.f3, f.f4}));
}

std::vector<DetectedPeak> detect_maxima(const SpectrumResult& s) {
  std::vector<DetectedPeak> out;
  if (s.mags.size() < 3) return out;
  const double top = *std::max_element(s.mags.begin(), s.mags.end());
  const double floor = 1e-3 * top;
  for (std::size_t k = 1; k + 1 < s.mags.size(); ++k) {
    if (s.mags[k] > s.mags[k - 1] && s.mags[k] >= s.mags[k + 1] && s.mags[k] >= floor) {
      out.push_back({s.freqs[k], s.mags[k]});
    }
  }
  return out;
}

std::map<char, SpectralPeak> assign_labels(std::span<const DetectedPeak> maxima, double df,
                                           const WellParams& p, TraceKind kind) {
  const auto f = analytic::characteristic_frequencies(p);
  const std::array<double, 4> all{f.f1, f.f2, f.f3, f.f4};
  double min_gap = INFINITY;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const double gap = std::abs(all[i] - all[j]);
      if (gap > 0.0) min_gap = std::min(min_gap, gap);
    }
  }
  if (std::isfinite(min_gap) && df > 0.25 * min_gap) {
    throw std::invalid_argument("identify_spectral_peaks: frequency resolution too coarse");
  }

  std::vector<std::pair<char, double>> expected{{'A', f.f1}, {'B', f.f3}, {'C', f.f4}};
  if (kind == TraceKind::d0) expected.emplace_back('D', f.f2);
  if (kind == TraceKind::d2v) expected.emplace_back('E', f.f2);

  std::map<char, SpectralPeak> labels;
  for (const auto& [label, target] : expected) {
    SpectralPeak peak;
    peak.expected = target;
    if (target < 2.0 * df) {
      peak.status = PeakStatus::merged_with_dc;
      labels[label] = peak;
      continue;
    }
    // Largest maximum inside the window; ties go to the lower frequency so the
    // choice is independent of the input order.
    for (const DetectedPeak& m : maxima) {
      if (std::abs(m.frequency - target) > 2.0 * df) continue;
      const bool better = peak.status != PeakStatus::present || m.magnitude > peak.magnitude ||
                          (m.magnitude == peak.magnitude && m.frequency < peak.frequency);
      if (better) {
        peak.status = PeakStatus::present;
        peak.frequency = m.frequency;
        peak.magnitude = m.magnitude;
      }
    }
    labels[label] = peak;
  }
  return labels;
}

std::map<char, SpectralPeak> identify_spectral_peaks(const SpectrumResult& s, const WellParams& p,
                                                     TraceKind kind) {
  const auto maxima = detect_maxima(s);
  return assign_labels(maxima, s.df, p, kind);
}

double dominant_frequency(const SpectrumResult& s, double f_min) {
  double best = -1.0;
  double freq = 0.0;
  for (std::size_t k = 0; k < s.mags.size(); ++k) {
    if (s.freqs[k] >= f_min && s.mags[k] > best) {
      best = s.mags[k];
      freq = s.freqs[k];
    }
  }
  if (best < 0.0) throw std::invalid_argument("dominant_frequency: no bins above f_min");
  return freq;
}

}  // namespace deltatrap::analysis
