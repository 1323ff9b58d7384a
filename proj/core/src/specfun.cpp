#include "deltatrap/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace deltatrap::specfun {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrtPi = std::numbers::inv_sqrtpi;

// Largest real exponent whose exp(), doubled, still fits in a double.
constexpr double kMaxExponent = 708.0;

constexpr double kSeriesRadius = 1.0;
constexpr double kContinuedFractionRadius = 7.0;

// Pole-sum grid: step h, nodes (n + shift) h with |node| <= 7 so the dropped
// Gaussian weights are below exp(-49).
constexpr double kStep = 0.5;
constexpr int kHalfNodes = 14;

struct NodeTable {
  std::array<double, 2 * kHalfNodes + 1> nodes{};
  std::array<double, 2 * kHalfNodes + 1> weights{};
};

NodeTable make_table(double shift) {
  NodeTable table;
  for (int n = -kHalfNodes; n <= kHalfNodes; ++n) {
    const double t = (n + shift) * kStep;
    table.nodes[n + kHalfNodes] = t;
    table.weights[n + kHalfNodes] = std::exp(-t * t);
  }
  return table;
}

const NodeTable& table_for(double shift) {
  static const NodeTable aligned = make_table(0.0);
  static const NodeTable staggered = make_table(0.5);
  return shift == 0.0 ? aligned : staggered;
}

// exp(w) with the real part clamped so the result is always finite.
cplx saturating_exp(cplx w) {
  const double re = std::min(w.real(), kMaxExponent);
  return std::polar(std::exp(re), w.imag());
}

// w(z) = exp(-z^2) + i z sum_m (-z^2)^m / Gamma(m + 3/2); |z| < 1.
cplx maclaurin(cplx z) {
  const cplx minus_z2 = -z * z;
  cplx term = 2.0 * kInvSqrtPi;
  cplx sum = term;
  for (int m = 0; m < 60; ++m) {
    term *= minus_z2 / (m + 1.5);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return std::exp(minus_z2) + cplx(0.0, 1.0) * z * sum;
}

// Trapezoidal rule for (i/pi) int exp(-t^2)/(z - t) dt plus the residue
// correction of the pole at t = z. Valid for Im z >= 0. The node grid is
// shifted by h/2 when Re z sits close to a node.
cplx pole_sum(cplx z) {
  const double frac = z.real() / kStep - std::floor(z.real() / kStep);
  const double shift = (frac >= 0.25 && frac <= 0.75) ? 0.0 : 0.5;
  const NodeTable& table = table_for(shift);

  cplx sum = 0.0;
  for (std::size_t n = 0; n < table.nodes.size(); ++n) {
    sum += table.weights[n] / (z - table.nodes[n]);
  }
  const cplx trapezoid = cplx(0.0, kStep / kPi) * sum;

  const cplx phase = std::exp(cplx(0.0, -2.0 * kPi / kStep) * (z - shift * kStep));
  const cplx correction = 2.0 * std::exp(-z * z) / (1.0 - phase);
  return trapezoid + correction;
}

// Laplace continued fraction, Im z >= 0 and |z| large.
cplx continued_fraction(cplx z) {
  const int depth = 12 + static_cast<int>(std::ceil(200.0 / std::abs(z)));
  cplx tail = 0.0;
  for (int k = depth; k >= 1; --k) {
    tail = (0.5 * k) / (z - tail);
  }
  return cplx(0.0, kInvSqrtPi) / (z - tail);
}

cplx upper_half_plane(cplx z) {
  // w(-conj z) = conj w(z): evaluate in the right quadrant only, which also
  // keeps w exactly real on the imaginary axis.
  if (z.real() < 0.0) return std::conj(upper_half_plane(-std::conj(z)));
  const double r = std::abs(z);
  cplx w;
  if (r < kSeriesRadius) {
    w = maclaurin(z);
  } else if (r < kContinuedFractionRadius) {
    w = pole_sum(z);
  } else {
    w = continued_fraction(z);
  }
  if (z.real() == 0.0) w.imag(0.0);
  return w;
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

cplx faddeyeva(cplx z) {
  if (!finite(z)) throw std::invalid_argument("faddeyeva: non-finite argument");
  if (std::abs(z) < kSeriesRadius) return maclaurin(z);
  if (z.imag() >= 0.0) return upper_half_plane(z);
  // w(z) = 2 exp(-z^2) - w(-z)
  return 2.0 * saturating_exp(-z * z) - upper_half_plane(-z);
}

cplx moshinsky(const MoshinskyArgs& args) {
  const auto& [x, k, t] = args;
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("moshinsky: time argument must be positive and finite");
  }
  if (!finite(x) || !finite(k)) throw std::invalid_argument("moshinsky: non-finite argument");

  const cplx one_plus_i(1.0, 1.0);
  const cplx z = 0.5 * one_plus_i * std::sqrt(t) * (k - x / t);
  const cplx fresnel_phase = cplx(0.0, 1.0) * x * x / (2.0 * t);

  const cplx arg = -z;
  if (arg.imag() >= 0.0 || std::abs(arg) < kSeriesRadius) {
    return 0.5 * saturating_exp(fresnel_phase) * faddeyeva(arg);
  }
  // exp(i x^2/2t) exp(-z^2) collapses to the plane wave exp(ikx - ik^2 t/2).
  const cplx plane_wave = saturating_exp(cplx(0.0, 1.0) * (k * x - 0.5 * k * k * t));
  return plane_wave - 0.5 * saturating_exp(fresnel_phase) * upper_half_plane(z);
}

}  // namespace deltatrap::specfun
