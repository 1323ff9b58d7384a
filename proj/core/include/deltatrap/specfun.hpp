#pragma once

#include <complex>

namespace deltatrap::specfun {

using cplx = std::complex<double>;

/// Faddeyeva function w(z) = exp(-z^2) erfc(-iz).
///
/// Region-switched: Maclaurin series near the origin, a trapezoidal pole sum
/// with the exact pole correction in the intermediate annulus, and the Laplace
/// continued fraction far from the origin. The lower half-plane is served by
/// w(z) = 2 exp(-z^2) - w(-z). Where exp(-z^2) exceeds the double range the
/// result saturates to a large finite value instead of overflowing.
cplx faddeyeva(cplx z);

/// Arguments of the Moshinsky function M(x, k, t).
///
/// `t` is the propagation-time argument exactly as it appears in M; callers
/// that work in physical time of the hbar = 2m = 1 problem pass 2 * (t - t').
struct MoshinskyArgs {
  cplx x;
  cplx k;
  double t;
};

/// M(x, k, t) = exp(i x^2 / 2t) / 2 * w(-z), z = (1 + i)/2 sqrt(t) (k - x/t).
///
/// Real `x` is the common case; complex `x` is accepted so that integrals can
/// be carried along rotated contours. When -z lies in the lower half-plane the
/// reflected form exp(ikx - ik^2 t/2) - exp(i x^2/2t) w(z)/2 is used, with the
/// two exponents already combined so nothing overflows.
///
/// Throws std::invalid_argument if t <= 0 or any argument is non-finite.
cplx moshinsky(const MoshinskyArgs& args);

inline cplx moshinsky(cplx x, cplx k, double t) { return moshinsky({x, k, t}); }

}  // namespace deltatrap::specfun
