#include "deltatrap/analytic.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "deltatrap/specfun.hpp"

namespace deltatrap::analytic {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

void require_positive_time(double t, const char* who) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument(std::string(who) + ": requires t > 0");
  }
}

cplx mosh(cplx x, cplx k, double t) { return specfun::moshinsky(x, k, t); }

}  // namespace

WellParams::WellParams(double gamma, double v) : gamma_(gamma), v_(v) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("WellParams: gamma must be positive and finite");
  }
  if (!std::isfinite(v)) throw std::invalid_argument("WellParams: v must be finite");
}

double initial_bound_state(double x, const WellParams& p) {
  const double g = p.gamma();
  return std::sqrt(0.5 * g) * std::exp(-0.5 * g * std::abs(x));
}

cplx free_kernel(cplx dx, double dt) {
  require_positive_time(dt, "free_kernel");
  return std::sqrt(1.0 / (4.0 * kPi * kI * dt)) * std::exp(kI * dx * dx / (4.0 * dt));
}

cplx free_propagator(SpaceTimePoint to, SpaceTimePoint from) {
  return free_kernel(to.x - from.x, to.t - from.t);
}

cplx free_evolution(SpaceTimePoint pt, const WellParams& p) {
  require_positive_time(pt.t, "free_evolution");
  const double g = p.gamma();
  const cplx k(0.0, -0.5 * g);
  return std::sqrt(0.5 * g) * (mosh(pt.x, k, 2.0 * pt.t) + mosh(-pt.x, k, 2.0 * pt.t));
}

cplx moving_delta_perturbation(SpaceTimePoint to, cplx x_from, double t_from, double anchor,
                               const WellParams& p) {
  const double dt = to.t - t_from;
  require_positive_time(dt, "moving_delta_perturbation");
  const double g = p.gamma();
  const double v = p.v();
  const double rel_to = to.x - v * to.t;
  const cplx rel_from = x_from - v * t_from;
  const cplx phase = 0.5 * (v * rel_to - v * rel_from + 0.5 * v * v * dt);
  const cplx distance = std::abs(rel_to) + quadrature::branch_abs(x_from, v * t_from, anchor);
  return 0.5 * g * std::exp(kI * phase) * mosh(distance, cplx(0.0, 0.5 * g), 2.0 * dt);
}

cplx moving_delta_propagator(SpaceTimePoint to, SpaceTimePoint from, const WellParams& p) {
  return free_propagator(to, from) + moving_delta_perturbation(to, from.x, from.t, from.x, p);
}

double integral_identity_residual(const IdentityCase& c, const quadrature::Options& opts) {
  require_positive_time(c.t, "integral_identity_residual");
  const cplx denom = c.v0 - kI * c.k;
  if (std::abs(denom) <= 1e-14 * (1.0 + std::abs(c.v0))) {
    throw std::invalid_argument("integral_identity_residual: V0 - ik vanishes");
  }
  const double ax = std::abs(c.x);
  const cplx q = -kI * c.v0;

  const quadrature::ContourIntegrand integrand = [&](cplx xp, double) {
    return std::exp(kI * c.k * xp) * mosh(ax - xp, q, c.t);
  };

  // Stationary point of exp(i (|x| - x')^2 / 2t + i Re(k) x') on the half-line.
  const double saddle = std::min(0.0, ax - c.k.real() * c.t);
  const double curvature = 0.5 / c.t;
  constexpr cplx kEighth{std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2};

  quadrature::Result lhs = quadrature::integrate_ray(integrand, saddle, -kEighth, saddle - 1.0,
                                                     1.0 / std::sqrt(curvature), opts)
                               .reversed();
  if (saddle < 0.0) {
    const double phase = curvature * saddle * saddle;
    const int pieces = static_cast<int>(std::min(1.0 + phase / (2.0 * kPi), 4e6));
    lhs += quadrature::integrate_segment(integrand, saddle, 0.0, 0.5 * saddle, opts, pieces);
  }
  if (!lhs.converged) {
    throw quadrature::QuadratureError("integral identity quadrature did not converge", lhs);
  }
  const cplx rhs = (mosh(ax, c.k, c.t) - mosh(ax, q, c.t)) / denom;
  return std::abs(lhs.value - rhs) / (1.0 + std::abs(rhs));
}

cplx exact_wavefunction_closed(SpaceTimePoint pt, const WellParams& p) {
  require_positive_time(pt.t, "exact_wavefunction_closed");
  const double g = p.gamma();
  const double v = p.v();
  const double x = pt.x;
  const double t = pt.t;
  const double dist = std::abs(x - v * t);
  const double T = 2.0 * t;

  const cplx carrier = std::exp(kI * (0.5 * v * x - 0.25 * v * v * t));
  const double amp = std::pow(0.5 * g, 1.5);
  const cplx bound_k(0.0, 0.5 * g);
  const cplx m_bound = mosh(dist, bound_k, T);

  const cplx left = amp / (g - 0.5 * kI * v) * (mosh(dist, cplx(-0.5 * v, -0.5 * g), T) - m_bound);
  const cplx right = amp / (g + 0.5 * kI * v) * (mosh(dist, cplx(0.5 * v, -0.5 * g), T) - m_bound);
  return free_evolution(pt, p) - carrier * left - carrier * right;
}

InitialState bound_state_initial(const WellParams& p) {
  const double g = p.gamma();
  const double norm = std::sqrt(0.5 * g);
  return {[g, norm](cplx x, double anchor) {
            return norm * std::exp(-0.5 * g * quadrature::branch_abs(x, 0.0, anchor));
          },
          {0.0},
          0.0};
}

InitialState moving_eigenstate_initial(const WellParams& p) {
  const double g = p.gamma();
  const double v = p.v();
  const double norm = std::sqrt(0.5 * g);
  return {[g, v, norm](cplx x, double anchor) {
            return norm * std::exp(0.5 * kI * v * x - 0.5 * g * quadrature::branch_abs(x, 0.0, anchor));
          },
          {0.0},
          0.5 * v};
}

quadrature::Result propagate_by_quadrature(const InitialState& phi, SpaceTimePoint pt,
                                           const WellParams& p, const quadrature::Options& opts) {
  require_positive_time(pt.t, "propagate_by_quadrature");
  const double t = pt.t;
  const double v = p.v();

  const quadrature::ContourIntegrand integrand = [&](cplx xp, double anchor) {
    const cplx kernel = free_kernel(pt.x - xp, t) + moving_delta_perturbation(pt, xp, 0.0, anchor, p);
    return kernel * phi.value(xp, anchor);
  };

  // Kinks of the integrand plus the stationary points of every quadratic
  // phase: the free term, and the perturbation on either side of the well.
  const double q = phi.wavenumber;
  const double dist = std::abs(pt.x - v * t);
  std::vector<double> breaks = phi.kinks;
  breaks.push_back(0.0);
  breaks.push_back(pt.x - 2.0 * q * t);
  breaks.push_back(t * (v - 2.0 * q) - dist);
  breaks.push_back(dist - t * (v - 2.0 * q));

  return quadrature::integrate_oscillatory_line(integrand, breaks, 0.25 / t, opts);
}

cplx exact_wavefunction_quadrature(SpaceTimePoint pt, const WellParams& p,
                                   const quadrature::Options& opts) {
  return propagate_by_quadrature(bound_state_initial(p), pt, p, opts).value;
}

cplx moving_bound_eigenstate(SpaceTimePoint pt, const WellParams& p) {
  const double g = p.gamma();
  const double v = p.v();
  const double phase = 0.25 * (g * g - v * v) * pt.t + 0.5 * v * pt.x;
  return std::sqrt(0.5 * g) * std::polar(std::exp(-0.5 * g * std::abs(pt.x - v * pt.t)), phase);
}

double survival_probability(const WellParams& p) {
  const double theta = massey_parameter(p);
  const double d = 4.0 + theta * theta;
  return 16.0 / (d * d);
}

double survival_probability_by_overlap(const WellParams& p) {
  const double g = p.gamma();
  const double v = p.v();
  const auto integrand = [g, v](double x) {
    return 0.5 * g * std::polar(std::exp(-g * std::abs(x)), -0.5 * v * x);
  };
  quadrature::Options opts;
  opts.abs_tol = 1e-14;
  opts.rel_tol = 1e-14;
  const std::array<double, 1> kink{0.0};
  const cplx overlap = quadrature::integrate_decaying_line(integrand, kink, 1.0 / g, opts).value;
  return std::norm(overlap);
}

AsymptoticTerms asymptotic_terms(SpaceTimePoint pt, const WellParams& p) {
  require_positive_time(pt.t, "asymptotic_terms");
  const double g = p.gamma();
  const double v = p.v();
  const double x = pt.x;
  const double t = pt.t;

  const double spread = x / (g * t);
  const cplx free = std::sqrt(2.0 / (kI * kPi * g * t)) * std::exp(kI * x * x / (4.0 * t)) /
                    (1.0 + spread * spread);

  const double ratio = v / (2.0 * g);
  const cplx well_phase = kI * (0.5 * v * x + 0.25 * (g * g - 2.0 * v * v) * t);
  const cplx well = std::sqrt(0.5 * g) / (1.0 + ratio * ratio) *
                    std::exp(well_phase - 0.5 * g * std::abs(x - v * t));

  const cplx reflected = 1.0 / (1.0 + kI * ratio) * std::sqrt(kI * t * g / (8.0 * kPi)) /
                         ((x - 2.0 * v * t) + kI * g * t) *
                         std::exp(kI * (x * x / (4.0 * t) - v * v * t));
  return {free, well, reflected};
}

Frequencies characteristic_frequencies(const WellParams& p) {
  const double g2 = p.gamma() * p.gamma();
  const double v2 = p.v() * p.v();
  const double scale = 1.0 / (8.0 * kPi);
  return {g2 * scale, v2 * scale, std::abs(v2 - g2) * scale, std::abs(2.0 * v2 - g2) * scale};
}

double massey_parameter(const WellParams& p) { return std::abs(p.v()) / p.gamma(); }

}  // namespace deltatrap::analytic
