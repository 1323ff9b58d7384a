#pragma once

// Observables extracted from wavefunction trajectories: densities at the
// three tracked points x = 0, vt, 2vt, power-law decay fits and windowed
// spectra with the A-E peak assignment.

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "deltatrap/analytic.hpp"
#include "deltatrap/oracle.hpp"

namespace deltatrap::analysis {

using cplx = std::complex<double>;
using analytic::WellParams;

/// A time-ordered sequence of wavefunction snapshots, queried by density.
class Trajectory {
 public:
  virtual ~Trajectory() = default;
  virtual std::size_t size() const = 0;
  virtual double time(std::size_t i) const = 0;
  /// |psi(x, time(i))|^2. Throws std::out_of_range if x is outside the snapshot.
  virtual double density(std::size_t i, double x) const = 0;
};

/// Grid snapshots; densities by 4-point cubic Lagrange interpolation of |psi|^2.
class SnapshotTrajectory final : public Trajectory {
 public:
  explicit SnapshotTrajectory(std::vector<oracle::WavefunctionField> snapshots);

  std::size_t size() const override { return snapshots_.size(); }
  double time(std::size_t i) const override { return snapshots_.at(i).t; }
  double density(std::size_t i, double x) const override;

 private:
  std::vector<oracle::WavefunctionField> snapshots_;
};

/// |psi|^2 at x on a grid field by cubic interpolation (one-sided at the edges).
double interpolate_density(const oracle::WavefunctionField& f, double x);

/// A wavefunction known as a function psi(x, t), sampled at the given times.
class SampledTrajectory final : public Trajectory {
 public:
  SampledTrajectory(std::vector<double> times, std::function<cplx(double x, double t)> psi);

  std::size_t size() const override { return times_.size(); }
  double time(std::size_t i) const override { return times_.at(i); }
  double density(std::size_t i, double x) const override;

 private:
  std::vector<double> times_;
  std::function<cplx(double, double)> psi_;
};

/// Closed-form exact wavefunction, with the initial state at t = 0.
SampledTrajectory closed_form_trajectory(std::vector<double> times, const WellParams& p);

/// n uniformly spaced times t_k = k * duration / n, k = 0 .. n-1.
std::vector<double> uniform_times(double duration, std::size_t n);

struct PeakTrace {
  std::vector<double> times;
  std::vector<double> d0;
  std::vector<double> dv;
  std::vector<double> d2v;
};

/// Densities at x = 0, vt and 2vt for every snapshot. Throws
/// std::out_of_range if a tracked point leaves a snapshot and
/// std::invalid_argument if times are not strictly increasing.
PeakTrace track_peaks(const Trajectory& trajectory, const WellParams& p);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
  std::size_t samples = 0;
  bool used_envelope = false;
};

/// Least-squares slope of log(value) against log(t) over [t_lo, t_hi]. With
/// `envelope`, only interior local maxima are fitted; if fewer than 8 exist the
/// trace is treated as monotone and every sample is used. Throws
/// std::invalid_argument for fewer than 8 samples or a non-positive value.
PowerLawFit fit_power_law(std::span<const double> times, std::span<const double> values,
                          double t_lo, double t_hi, bool envelope = false);

enum class PeakStatus { present, absent, merged_with_dc };

struct SpectralPeak {
  double expected = 0.0;
  PeakStatus status = PeakStatus::absent;
  double frequency = 0.0;
  double magnitude = 0.0;
};

struct SpectrumResult {
  std::vector<double> freqs;
  std::vector<double> mags;
  std::map<char, SpectralPeak> labels;
  double df = 0.0;
  double parseval_error = 0.0;
};

/// |DFT| of the mean-removed, Hann-windowed series on frequencies k / (N dt),
/// k = 0 .. N/2. Throws std::invalid_argument for fewer than 64 samples,
/// non-uniform sampling, or a sampling rate not above 2 * max_frequency.
SpectrumResult spectrum(std::span<const double> times, std::span<const double> values,
                        double max_frequency);

/// Same with the anti-aliasing bound taken from the largest characteristic frequency.
SpectrumResult spectrum(std::span<const double> times, std::span<const double> values,
                        const WellParams& p);

enum class TraceKind { d0, dv, d2v };

struct DetectedPeak {
  double frequency;
  double magnitude;
};

/// Interior local maxima of the magnitude at or above 1e-3 of the largest bin.
std::vector<DetectedPeak> detect_maxima(const SpectrumResult& s);

/// Matches maxima to the characteristic frequencies within +-2 df:
/// A = f1, B = f3, C = f4, and f2 as D on the x = 0 trace or E on the x = 2vt
/// trace. An expected frequency below 2 df is reported merged with DC. The
/// result does not depend on the order of `maxima`. Throws
/// std::invalid_argument if df exceeds a quarter of the smallest nonzero gap
/// between characteristic frequencies.
std::map<char, SpectralPeak> assign_labels(std::span<const DetectedPeak> maxima, double df,
                                           const WellParams& p, TraceKind kind);

std::map<char, SpectralPeak> identify_spectral_peaks(const SpectrumResult& s, const WellParams& p,
                                                     TraceKind kind);

/// Frequency of the largest bin at or above f_min.
double dominant_frequency(const SpectrumResult& s, double f_min);

}  // namespace deltatrap::analysis
