#pragma once

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace deltatrap::quadrature {

using cplx = std::complex<double>;

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  int max_intervals = 200000;  ///< bisections allowed beyond the initial partition
};

struct Result {
  cplx value{};
  double error = 0.0;
  long evaluations = 0;
  bool converged = true;

  Result& operator+=(const Result& other) {
    value += other.value;
    error += other.error;
    evaluations += other.evaluations;
    converged = converged && other.converged;
    return *this;
  }

  /// The same integral taken along the path in the opposite direction.
  Result reversed() const {
    Result r = *this;
    r.value = -value;
    return r;
  }
};

/// Raised when adaptive refinement runs out of budget before meeting the
/// requested tolerance. Distinct from a large but converged answer.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, Result partial)
      : std::runtime_error(what), partial_(partial) {}
  const Result& partial() const noexcept { return partial_; }

 private:
  Result partial_;
};

/// Integrand over a complex position. `anchor` is a real point inside the
/// real-axis piece the current contour was deformed from; piecewise-analytic
/// integrands use it to pick the branch of |x - a| (see branch_abs).
using ContourIntegrand = std::function<cplx(cplx x, double anchor)>;

/// Analytic continuation of |x - a| from the real piece containing `anchor`.
inline cplx branch_abs(cplx x, double a, double anchor) { return anchor >= a ? x - a : a - x; }

/// Global adaptive Gauss-Kronrod (7/15) along the straight segment from `a`
/// to `b`, starting from `initial_pieces` equal subintervals. Does not throw;
/// check `converged`.
Result integrate_segment(const ContourIntegrand& f, cplx a, cplx b, double anchor,
                         const Options& opts, int initial_pieces = 1);

/// Integral of f dz along the ray a + s * direction, oriented away from a,
/// s in [0, inf). Taken in chunks of growing length (first chunk `scale`)
/// until a chunk contributes nothing.
Result integrate_ray(const ContourIntegrand& f, cplx a, cplx direction, double anchor,
                     double scale, const Options& opts);

/// Integral over the whole real line of a piecewise-analytic integrand whose
/// oscillation is dominated by exp(i A (x - c)^2) terms with A = `curvature`.
///
/// `breakpoints` must contain every kink of the integrand and every
/// stationary point c of its quadratic phases. Finite pieces are integrated
/// on the real axis; the two infinite tails are rotated by pi/4 into the
/// sector where the Gaussian phase decays.
///
/// Throws QuadratureError if any piece fails to converge.
Result integrate_oscillatory_line(const ContourIntegrand& f, std::span<const double> breakpoints,
                                  double curvature, const Options& opts);

/// Integral over the real line of an exponentially decaying integrand with
/// kinks at `breakpoints`; tails on the real axis in chunks of `decay_length`.
///
/// Throws QuadratureError if any piece fails to converge.
Result integrate_decaying_line(const std::function<cplx(double)>& f,
                               std::span<const double> breakpoints, double decay_length,
                               const Options& opts);

/// Integral of a real-valued function on [a, b]. Throws QuadratureError on
/// non-convergence.
Result integrate_real(const std::function<double(double)>& f, double a, double b,
                      const Options& opts, int initial_pieces = 1);

}  // namespace deltatrap::quadrature
