#include "deltatrap/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

namespace deltatrap::quadrature {
namespace {

// Kronrod 15-point abscissae (descending, last is the centre) and weights;
// every odd-indexed abscissa is also a 7-point Gauss node.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  cplx value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

// One G7K15 panel on parameter interval [lo, hi] of the segment a + s (b - a).
Panel gauss_kronrod(const ContourIntegrand& f, cplx a, cplx span, double anchor, double lo,
                    double hi) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  const auto at = [&](double s) { return f(a + s * span, anchor); };

  const cplx centre = at(mid);
  cplx kronrod = kWgk[7] * centre;
  cplx gauss = kWg[3] * centre;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const cplx pair = at(mid - dx) + at(mid + dx);
    kronrod += kWgk[i] * pair;
    if (i % 2 == 1) gauss += kWg[i / 2] * pair;
  }
  const cplx scale = half * span;
  return {lo, hi, kronrod * scale, std::abs((kronrod - gauss) * scale)};
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

constexpr cplx kEighthTurn{std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2};

}  // namespace

Result integrate_segment(const ContourIntegrand& f, cplx a, cplx b, double anchor,
                         const Options& opts, int initial_pieces) {
  const cplx span = b - a;
  initial_pieces = std::max(initial_pieces, 1);

  std::priority_queue<Panel> heap;
  Result result;
  for (int i = 0; i < initial_pieces; ++i) {
    const double lo = static_cast<double>(i) / initial_pieces;
    const double hi = static_cast<double>(i + 1) / initial_pieces;
    Panel p = gauss_kronrod(f, a, span, anchor, lo, hi);
    result.value += p.value;
    result.error += p.error;
    heap.push(p);
  }
  long panels = initial_pieces;

  while (true) {
    const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(result.value));
    if (result.error <= tol) break;
    if (panels - initial_pieces >= opts.max_intervals || !finite(result.value)) {
      result.converged = false;
      break;
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (mid <= worst.lo || mid >= worst.hi) {
      result.converged = false;
      break;
    }
    Panel left = gauss_kronrod(f, a, span, anchor, worst.lo, mid);
    Panel right = gauss_kronrod(f, a, span, anchor, mid, worst.hi);
    result.value += left.value + right.value - worst.value;
    result.error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }

  // Re-sum to shed the drift accumulated by incremental updates.
  cplx value = 0.0;
  double error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  result.value = value;
  result.error = error;
  result.evaluations = panels * 15 + (panels - initial_pieces) * 15;
  result.converged = result.converged && finite(value);
  return result;
}

Result integrate_ray(const ContourIntegrand& f, cplx a, cplx direction, double anchor,
                     double scale, const Options& opts) {
  Options chunk_opts = opts;
  chunk_opts.abs_tol = 0.25 * opts.abs_tol;

  Result total;
  double lo = 0.0;
  double hi = scale;
  for (int chunk = 0; chunk < 64; ++chunk) {
    const Result piece =
        integrate_segment(f, a + lo * direction, a + hi * direction, anchor, chunk_opts, 2);
    total += piece;
    const double tail_bound = std::abs(f(a + hi * direction, anchor)) * (hi - lo);
    if (chunk >= 2 && std::abs(piece.value) <= 1e-3 * opts.abs_tol &&
        tail_bound <= 1e-3 * opts.abs_tol) {
      return total;
    }
    lo = hi;
    hi *= 2.0;
  }
  total.converged = false;
  return total;
}

Result integrate_oscillatory_line(const ContourIntegrand& f, std::span<const double> breakpoints,
                                  double curvature, const Options& opts) {
  std::vector<double> points(breakpoints.begin(), breakpoints.end());
  if (points.empty()) points.push_back(0.0);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  const double length = curvature > 0.0 ? 1.0 / std::sqrt(curvature) : 1.0;
  const std::size_t pieces = points.size() + 1;
  Options piece_opts = opts;
  piece_opts.abs_tol = opts.abs_tol / static_cast<double>(pieces);

  Result total;
  total += integrate_ray(f, points.front(), -kEighthTurn, points.front() - 1.0, length, piece_opts)
               .reversed();
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double a = points[i];
    const double b = points[i + 1];
    // One oscillation of the steepest quadratic phase per starting panel.
    double phase = 0.0;
    for (double c : points) {
      phase = std::max(phase, curvature * std::abs((b - c) * (b - c) - (a - c) * (a - c)));
    }
    const int initial = static_cast<int>(std::min(1.0 + phase / (2.0 * std::numbers::pi), 4e6));
    total += integrate_segment(f, a, b, 0.5 * (a + b), piece_opts, initial);
  }
  total += integrate_ray(f, points.back(), kEighthTurn, points.back() + 1.0, length, piece_opts);

  if (!total.converged) {
    throw QuadratureError("oscillatory line integral did not converge", total);
  }
  return total;
}

Result integrate_decaying_line(const std::function<cplx(double)>& f,
                               std::span<const double> breakpoints, double decay_length,
                               const Options& opts) {
  std::vector<double> points(breakpoints.begin(), breakpoints.end());
  if (points.empty()) points.push_back(0.0);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  const ContourIntegrand g = [&f](cplx x, double) { return f(x.real()); };
  const std::size_t pieces = points.size() + 1;
  Options piece_opts = opts;
  piece_opts.abs_tol = opts.abs_tol / static_cast<double>(pieces);

  Result total;
  total += integrate_ray(g, points.front(), -1.0, points.front() - 1.0, decay_length, piece_opts)
               .reversed();
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    total += integrate_segment(g, points[i], points[i + 1], 0.0, piece_opts, 4);
  }
  total += integrate_ray(g, points.back(), 1.0, points.back() + 1.0, decay_length, piece_opts);

  if (!total.converged) {
    throw QuadratureError("line integral did not converge", total);
  }
  return total;
}

Result integrate_real(const std::function<double(double)>& f, double a, double b,
                      const Options& opts, int initial_pieces) {
  const ContourIntegrand g = [&f](cplx x, double) { return cplx(f(x.real()), 0.0); };
  Result r = integrate_segment(g, a, b, 0.0, opts, initial_pieces);
  if (!r.converged) throw QuadratureError("real integral did not converge", r);
  return r;
}

}  // namespace deltatrap::quadrature
