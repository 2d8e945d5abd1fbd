#pragma once

/// @file quadrature.hpp
/// Adaptive Simpson quadrature. Failures are errors, never silent: if the
/// recursion cannot reach the requested tolerance within the depth cap, a
/// NumericalError is thrown.

#include <cmath>
#include <functional>

#include "errors.hpp"

namespace cfgeom {

namespace detail {

template <class F>
double adapt_simpson(const F& f, double a, double fa, double b, double fb,
                     double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double h6 = (b - a) / 12.0;
  const double left = h6 * (fa + 4 * flm + fm);
  const double right = h6 * (fm + 4 * frm + fb);
  const double err = left + right - whole;
  if (std::fabs(err) <= 15.0 * tol) return left + right + err / 15.0;
  if (depth <= 0) throw NumericalError("quadrature: subdivision cap reached");
  return adapt_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Integral of f over [a, b] to relative tolerance rel_tol (with a tiny
/// absolute floor so that near-zero integrals terminate).
template <class F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-10,
                 int max_depth = 55) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
  const double tol = rel_tol * std::fabs(whole) + 1e-14;
  return detail::adapt_simpson(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

/// Fixed 7-point Gauss-Legendre panel over [a, b]. Exact for degree 13;
/// used for short smooth panels where adaptivity is overkill.
template <class F>
double gauss7(const F& f, double a, double b) {
  static const double X[7] = {
      -0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
      0.0,
      0.4058451513773972,  0.7415311855993945,  0.9491079123427585};
  static const double W[7] = {
      0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
      0.4179591836734694,
      0.3818300505051189, 0.2797053914892767, 0.1294849661688697};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 7; ++i) s += W[i] * f(c + h * X[i]);
  return s * h;
}

}  // namespace cfgeom
