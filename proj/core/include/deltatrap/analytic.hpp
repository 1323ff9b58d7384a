#pragma once

// Closed-form dynamics of a particle released from the bound state of an
// attractive delta well that starts moving at constant velocity at t = 0.
//
// Units hbar = 2m = 1 throughout: H = -d^2/dx^2 - gamma delta(x - v t),
// the free kernel is (4 pi i t)^(-1/2) exp(i x^2 / 4t), and every Moshinsky
// function is called with time argument 2 * (elapsed physical time).
// Half-integer powers of complex numbers use the principal branch.

#include <complex>
#include <functional>
#include <vector>

#include "deltatrap/quadrature.hpp"

namespace deltatrap::analytic {

using cplx = std::complex<double>;

/// Well strength gamma > 0 and velocity v. The sign of v is the direction of
/// motion; the Massey parameter uses |v|.
class WellParams {
 public:
  WellParams(double gamma, double v);

  double gamma() const noexcept { return gamma_; }
  double v() const noexcept { return v_; }

 private:
  double gamma_;
  double v_;
};

struct SpaceTimePoint {
  double x = 0.0;
  double t = 0.0;
};

/// Parameters of the half-line Moshinsky integral identity
///   int_{-inf}^0 exp(i k x') M(|x| + |x'|, -i V0, t) dx'
///     = [M(|x|, k, t) - M(|x|, -i V0, t)] / (V0 - i k).
struct IdentityCase {
  cplx k;
  cplx v0;
  double t;
  double x;
};

/// psi(x, 0) = sqrt(gamma/2) exp(-gamma |x| / 2).
double initial_bound_state(double x, const WellParams& p);

/// Free kernel K0(x, t | x', t'). Throws std::invalid_argument unless t > t'.
cplx free_propagator(SpaceTimePoint to, SpaceTimePoint from);

/// Free kernel for a complex displacement dx = x - x' (contour integration).
cplx free_kernel(cplx dx, double dt);

/// Free evolution psi_0(x, t) of the initial bound state, t > 0.
cplx free_evolution(SpaceTimePoint pt, const WellParams& p);

/// Kernel of the uniformly moving delta well: K0 plus
/// (gamma/2) exp(i Phi) M(|x - vt| + |x' - vt'|, +i gamma/2, 2 (t - t')).
cplx moving_delta_propagator(SpaceTimePoint to, SpaceTimePoint from, const WellParams& p);

/// Perturbation part of moving_delta_propagator for a complex source point.
/// `anchor` selects the branch of |x' - v t'| (see quadrature::branch_abs).
cplx moving_delta_perturbation(SpaceTimePoint to, cplx x_from, double t_from, double anchor,
                               const WellParams& p);

/// |LHS - RHS| / (1 + |RHS|) of the integral identity with the left side by
/// quadrature. Throws std::invalid_argument when V0 - ik = 0 and
/// quadrature::QuadratureError when the integral does not converge.
double integral_identity_residual(const IdentityCase& c, const quadrature::Options& opts = {});

/// Exact wavefunction in closed form (free term plus Moshinsky perturbation).
cplx exact_wavefunction_closed(SpaceTimePoint pt, const WellParams& p);

/// An initial state given by its analytic pieces: `value(x, anchor)` continues
/// the piece containing `anchor` off the real axis; `kinks` lists the joins.
/// `wavenumber` is the carrier q of an exp(i q x) factor, used to place the
/// stationary points of the propagated integrand.
struct InitialState {
  std::function<cplx(cplx x, double anchor)> value;
  std::vector<double> kinks;
  double wavenumber = 0.0;
};

InitialState bound_state_initial(const WellParams& p);
InitialState moving_eigenstate_initial(const WellParams& p);

/// int K_delta^(v)(x, t | x', 0) phi(x') dx' by contour quadrature.
quadrature::Result propagate_by_quadrature(const InitialState& phi, SpaceTimePoint pt,
                                           const WellParams& p, const quadrature::Options& opts);

/// Default absolute tolerance of exact_wavefunction_quadrature.
inline quadrature::Options default_wavefunction_quadrature() {
  quadrature::Options o;
  o.abs_tol = 1e-8;
  o.rel_tol = 1e-12;
  return o;
}

/// Ground truth: the bound state propagated with the moving-well kernel by
/// quadrature. Throws quadrature::QuadratureError on non-convergence.
cplx exact_wavefunction_quadrature(SpaceTimePoint pt, const WellParams& p,
                                   const quadrature::Options& opts = default_wavefunction_quadrature());

/// Eigenstate riding the moving well:
/// sqrt(gamma/2) exp(i (gamma^2 - v^2) t / 4) exp(i v x / 2) exp(-gamma |x - vt| / 2).
cplx moving_bound_eigenstate(SpaceTimePoint pt, const WellParams& p);

/// Long-time trapped fraction 16 / (4 + theta^2)^2.
double survival_probability(const WellParams& p);

/// |<psi_b^(v)(0) | psi(0)>|^2 by direct quadrature of the overlap integral.
double survival_probability_by_overlap(const WellParams& p);

struct AsymptoticTerms {
  cplx free;
  cplx well;
  cplx double_velocity;
  cplx sum() const { return free + well + double_velocity; }
};

/// Three-term long-time decomposition into the part left behind near x = 0,
/// the part trapped in the well and the part leaving at 2v. Requires t > 0.
AsymptoticTerms asymptotic_terms(SpaceTimePoint pt, const WellParams& p);

struct Frequencies {
  double f1;  ///< gamma^2 / 8 pi, bound-state energy
  double f2;  ///< v^2 / 8 pi, kinetic energy of the moving frame
  double f3;  ///< |f2 - f1|
  double f4;  ///< |2 v^2 - gamma^2| / 8 pi
};

Frequencies characteristic_frequencies(const WellParams& p);

/// theta = |v| / gamma.
double massey_parameter(const WellParams& p);

}  // namespace deltatrap::analytic
