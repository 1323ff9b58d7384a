#pragma once

// Independent Crank-Nicolson solver for i dpsi/dt = -psi'' + V(x, t) psi with
// the delta well replaced by a narrow normalized Gaussian of the same
// integrated strength. Zero Dirichlet boundaries; domains are sized so the
// wavefunction never reaches them.

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "deltatrap/analytic.hpp"

namespace deltatrap::oracle {

using cplx = std::complex<double>;
using analytic::WellParams;

/// Uniform grid of `n_points` samples on [x_min, x_max] plus the time step.
struct GridSpec {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t n_points = 0;
  double dt = 0.0;

  double dx() const { return (x_max - x_min) / static_cast<double>(n_points - 1); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }

  /// Throws std::invalid_argument unless n_points >= 3, x_max > x_min,
  /// dt > 0 and dt <= dx.
  void validate() const;
};

bool operator==(const GridSpec& a, const GridSpec& b);

/// Gaussian stand-in for -gamma delta(x - c): width is the standard deviation.
/// gamma = 0 gives the free particle.
class DeltaModel {
 public:
  DeltaModel(double width, double gamma);

  double width() const noexcept { return width_; }
  double gamma() const noexcept { return gamma_; }

  double potential(double x, double centre) const;

  /// Samples of V on the grid for a well centred at `centre`.
  std::vector<double> sample(const GridSpec& grid, double centre) const;

  /// dx * sum_j V(x_j); equals -gamma when the Gaussian is resolved.
  double integrated_strength(const GridSpec& grid, double centre) const;

  /// Throws std::invalid_argument unless 2 dx <= width <= 0.1 / gamma.
  void validate_on(const GridSpec& grid) const;

 private:
  double width_;
  double gamma_;
};

/// Default regularization width 0.01 / gamma.
DeltaModel default_model(const WellParams& p);

struct WavefunctionField {
  GridSpec grid;
  double t = 0.0;
  std::vector<cplx> values;
};

/// Trapezoid-rule inner product <a|b>. Throws std::invalid_argument on grid mismatch.
cplx overlap(const WavefunctionField& a, const WavefunctionField& b);
double norm(const WavefunctionField& a);

/// Throws std::invalid_argument if the field has the wrong length, non-finite
/// samples or a norm above 1 + 1e-6.
void check_field(const WavefunctionField& f);

/// Samples of an arbitrary function on the grid at time t.
WavefunctionField sample_field(const GridSpec& grid, double t,
                               const std::function<cplx(double)>& psi);

/// Domain [-M - 2|v| T, 2|v| T + M + 10 sqrt(T)] with M = 40/gamma, spacing
/// dx <= min(width/2, 0.05/gamma, pi/(8|v|)) and dt = dx.
GridSpec auto_grid(const WellParams& p, const DeltaModel& model, double t_final);

enum class GroundStateMethod { sampled, relaxed };

struct GroundState {
  WavefunctionField field;
  double energy = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Initial state on the grid: the sampled bound state (renormalized on the
/// grid), or the regularized well's own ground state relaxed in imaginary
/// time. Throws ConvergenceError if relaxation stalls.
GroundState ground_state_on_grid(const GridSpec& grid, const DeltaModel& model,
                                 GroundStateMethod method = GroundStateMethod::sampled);

/// <psi|H|psi> / <psi|psi> with the 3-point Laplacian and the well at `centre`.
double energy_expectation(const WavefunctionField& f, const DeltaModel& model, double centre);

/// Reusable Crank-Nicolson stepper; holds the tridiagonal workspace.
class CrankNicolson {
 public:
  CrankNicolson(GridSpec grid, DeltaModel model, WellParams params);

  /// Advances `field` by one grid.dt using H at the midpoint time.
  /// Throws std::invalid_argument when the well centre leaves
  /// [x_min + 5 width, x_max - 5 width].
  void step(WavefunctionField& field);

  const GridSpec& grid() const noexcept { return grid_; }

 private:
  GridSpec grid_;
  DeltaModel model_;
  WellParams params_;
  std::vector<cplx> rhs_;
  std::vector<cplx> sweep_;
  std::vector<double> potential_;
};

/// One time step, allocating its own workspace.
WavefunctionField step_crank_nicolson(const WavefunctionField& field, const DeltaModel& model,
                                      const WellParams& p);

using SnapshotSink = std::function<void(const WavefunctionField&)>;

/// Steps from initial.t to t_final (the step is shrunk so an integer number
/// of steps lands exactly on t_final) and hands a snapshot to `sink` at the
/// start, every `sample_every` steps and at the end. Step failures are
/// rethrown as std::runtime_error naming the failing time.
void evolve(const WavefunctionField& initial, const DeltaModel& model, const WellParams& p,
            double t_final, int sample_every, const SnapshotSink& sink);

std::vector<WavefunctionField> evolve(const WavefunctionField& initial, const DeltaModel& model,
                                      const WellParams& p, double t_final, int sample_every);

}  // namespace deltatrap::oracle
