#pragma once

/// @file curve_density.hpp
/// Areal and angular densities of a planar curve with respect to an observer
/// point, their discrete counterparts on inscribed polygons, and the
/// period-scaling constant for focal orbits.
///
/// Conventions. A curve is swept counterclockwise when det(gamma - O,
/// gamma') > 0; both densities are signed and flip together under
/// orientation reversal. The defining identities, with kappa the signed
/// curvature:
///
///   A = det(gamma - O, gamma') / |gamma'|        (areal density)
///   B = kappa / A^2                              (angular density)
///
/// so A^2 * B = kappa independently of the observer.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "polyline.hpp"
#include "quadrature.hpp"

namespace cfgeom {

using Vec2 = Point2<double>;

enum class ParamKind { generic, arclength };

/// A twice-differentiable planar curve on [t_lo, t_hi]. deriv2 may be an
/// analytic second derivative or any approximation good to the caller's
/// tolerance; the library's own constructions supply analytic ones.
struct ParamCurve {
  std::function<Vec2(double)> eval;
  std::function<Vec2(double)> deriv1;
  std::function<Vec2(double)> deriv2;
  double t_lo = 0.0;
  double t_hi = 0.0;
  ParamKind kind = ParamKind::generic;
};

inline double speed(const ParamCurve& c, double t) {
  const Vec2 d = c.deriv1(t);
  return std::hypot(d.x, d.y);
}

/// Signed areal density at parameter t: twice the instantaneous sector-area
/// sweep rate per unit of arclength.
inline double areal_density(const ParamCurve& c, Vec2 O, double t) {
  const Vec2 g = c.eval(t), d = c.deriv1(t);
  const double v = std::hypot(d.x, d.y);
  if (v == 0.0) throw NumericalError("areal_density: stationary point");
  return det2(g - O, d) / v;
}

/// Signed curvature at parameter t.
inline double curvature(const ParamCurve& c, double t) {
  const Vec2 d1 = c.deriv1(t), d2 = c.deriv2(t);
  const double v = std::hypot(d1.x, d1.y);
  if (v == 0.0) throw NumericalError("curvature: stationary point");
  return det2(d1, d2) / (v * v * v);
}

enum class AngularMethod { curvature, finite_difference };

/// Signed angular density at parameter t. The curvature method evaluates
/// kappa / A^2 and refuses observers placed on the tangent line (A ~ 0),
/// where that quotient degenerates. The finite-difference method evaluates
/// the three-point quotient
///
///       det(gamma(t+e) - gamma(t), gamma(t-e) - gamma(t))
///   ------------------------------------------------------------
///   e * det(gamma(t-e) - O, gamma(t) - O) * det(gamma(t) - O, gamma(t+e) - O)
///
/// with one Richardson step (4 R(e/2) - R(e)) / 3. The raw quotient
/// converges to |gamma'| * B (equal parameter offsets stand in for equal
/// arclength offsets), so it is divided by the speed at t to make the
/// estimate parametrization-independent.
inline double angular_density(const ParamCurve& c, Vec2 O, double t,
                              AngularMethod method = AngularMethod::curvature,
                              double fd_eps = 1e-4) {
  if (method == AngularMethod::curvature) {
    const double A = areal_density(c, O, t);
    if (std::fabs(A) <= 1e-9)
      throw NumericalError(
          "angular_density: observer on tangent line, quotient degenerate");
    return curvature(c, t) / (A * A);
  }
  if (!(fd_eps > 0)) throw std::domain_error("angular_density: fd_eps must be positive");
  const auto quot = [&](double e) {
    const Vec2 prev = c.eval(t - e), cur = c.eval(t), next = c.eval(t + e);
    const double num = det2(next - cur, prev - cur);
    const double den = e * det2(prev - O, cur - O) * det2(cur - O, next - O);
    if (den == 0.0)
      throw NumericalError("angular_density: degenerate finite-difference stencil");
    return num / den;
  };
  const double v = speed(c, t);
  if (v == 0.0) throw NumericalError("angular_density: stationary point");
  const double coarse = quot(fd_eps), fine = quot(0.5 * fd_eps);
  return (4.0 * fine - coarse) / (3.0 * v);
}

/// Signed area of the sector swept from the observer between parameters
/// t0 and t1 (one half the integral of det(gamma - O, gamma')).
inline double sector_area(const ParamCurve& c, Vec2 O, double t0, double t1) {
  return 0.5 * integrate(
                   [&](double t) { return det2(c.eval(t) - O, c.deriv1(t)); },
                   t0, t1);
}

/// Arclength of the whole parameter interval.
inline double curve_length(const ParamCurve& c) {
  return integrate([&](double t) { return speed(c, t); }, c.t_lo, c.t_hi);
}

namespace detail {

/// Cumulative-length table over a uniform parameter grid, with Newton
/// inversion. Shared by the three closures of the reparametrized curve.
struct ArcTable {
  ParamCurve base;
  std::vector<double> t_knot, s_knot;
  double total = 0.0;

  explicit ArcTable(ParamCurve c, int panels = 2048) : base(std::move(c)) {
    t_knot.reserve(panels + 1);
    s_knot.reserve(panels + 1);
    const double h = (base.t_hi - base.t_lo) / panels;
    double acc = 0.0;
    t_knot.push_back(base.t_lo);
    s_knot.push_back(0.0);
    for (int i = 0; i < panels; ++i) {
      const double a = base.t_lo + i * h, b = (i + 1 == panels) ? base.t_hi : a + h;
      acc += gauss7([&](double t) { return speed(base, t); }, a, b);
      t_knot.push_back(b);
      s_knot.push_back(acc);
    }
    total = acc;
  }

  double s_of_t(double t) const {
    const auto it = std::upper_bound(t_knot.begin(), t_knot.end(), t);
    const size_t i = (it == t_knot.begin()) ? 0 : (it - t_knot.begin() - 1);
    const size_t j = std::min(i, t_knot.size() - 2);
    return s_knot[j] + gauss7([&](double u) { return speed(base, u); }, t_knot[j], t);
  }

  double t_of_s(double s) const {
    if (s <= 0.0) return base.t_lo;
    if (s >= total) return base.t_hi;
    const auto it = std::upper_bound(s_knot.begin(), s_knot.end(), s);
    size_t j = (it - s_knot.begin()) - 1;
    double t = t_knot[j] + (t_knot[j + 1] - t_knot[j]) *
                               (s - s_knot[j]) / (s_knot[j + 1] - s_knot[j]);
    for (int iter = 0; iter < 50; ++iter) {
      const double g = s_of_t(t) - s;
      if (std::fabs(g) <= 1e-12 * (1.0 + total)) return t;
      const double v = speed(base, t);
      if (v == 0.0) throw NumericalError("arclength inversion: stationary point");
      t -= g / v;
      if (t < base.t_lo) t = base.t_lo;
      if (t > base.t_hi) t = base.t_hi;
    }
    throw NumericalError("arclength inversion did not converge");
  }
};

}  // namespace detail

/// Reparametrize by arclength. The result lives on [0, L], where L is the
/// total length, and reports ParamKind::arclength. First and second
/// derivatives are taken with respect to arclength (so |deriv1| = 1).
inline ParamCurve by_arclength(const ParamCurve& c) {
  auto table = std::make_shared<detail::ArcTable>(c);
  ParamCurve out;
  out.t_lo = 0.0;
  out.t_hi = table->total;
  out.kind = ParamKind::arclength;
  out.eval = [table](double s) { return table->base.eval(table->t_of_s(s)); };
  out.deriv1 = [table](double s) {
    const double t = table->t_of_s(s);
    const Vec2 d = table->base.deriv1(t);
    const double v = std::hypot(d.x, d.y);
    if (v == 0.0) throw NumericalError("by_arclength: stationary point");
    return Vec2{d.x / v, d.y / v};
  };
  out.deriv2 = [table](double s) {
    const double t = table->t_of_s(s);
    const Vec2 d1 = table->base.deriv1(t), d2 = table->base.deriv2(t);
    const double v2 = d1.x * d1.x + d1.y * d1.y;
    if (v2 == 0.0) throw NumericalError("by_arclength: stationary point");
    const double proj = (d1.x * d2.x + d1.y * d2.y) / v2;
    return Vec2{(d2.x - d1.x * proj) / v2, (d2.y - d1.y * proj) / v2};
  };
  return out;
}

/// A density sampled at one parameter value.
struct DensitySample {
  double t = 0.0;
  double A = 0.0;
  double B = 0.0;
  double kappa = 0.0;
};

/// Piecewise-constant density estimate on n equal parameter cells of [0, T].
/// value_at uses the cell containing t, clamped to the table range, so the
/// angle table (one entry shorter than the area table) is also addressable
/// by parameter.
struct StepDensity {
  int n = 0;
  double T = 0.0;
  std::vector<double> values;

  double value_at(double t) const {
    if (values.empty()) throw std::domain_error("StepDensity: empty table");
    long idx = static_cast<long>(std::floor(static_cast<double>(n) * t / T));
    if (idx < 0) idx = 0;
    if (idx >= static_cast<long>(values.size()))
      idx = static_cast<long>(values.size()) - 1;
    return values[static_cast<size_t>(idx)];
  }
};

struct DiscretizedDensities {
  StepDensity A;  ///< n entries, one per edge of the inscribed polygon
  StepDensity B;  ///< n - 1 entries, one per interior vertex
};

/// Discrete densities of the polygon inscribed at the n + 1 arclength
/// samples i * T / n. Edge areas scale by n / T to estimate A; vertex angle
/// elements scale by -n / T to estimate B, the sign compensating the
/// inscribed turn determinant det(A_{k-1} - A_k, A_{k+1} - A_k), which is
/// opposite in sign to the curve's turning for small cells.
inline DiscretizedDensities discretize(const ParamCurve& c, Vec2 O, int n) {
  if (c.kind != ParamKind::arclength)
    throw std::domain_error("discretize: curve must be arclength-parametrized");
  if (n < 3) throw std::domain_error("discretize: need at least 3 cells");
  const double T = c.t_hi - c.t_lo;
  Polyline<double> poly;
  poly.O = O;
  poly.vertices.reserve(n + 1);
  for (int i = 0; i <= n; ++i)
    poly.vertices.push_back(c.eval(c.t_lo + T * i / n));
  const CFSequence<double> lls = lls_of(poly);
  DiscretizedDensities out;
  out.A.n = n;
  out.A.T = T;
  out.A.values.reserve(n);
  out.B.n = n;
  out.B.T = T;
  out.B.values.reserve(n - 1);
  const double scale = n / T;
  for (size_t i = 0; i < lls.size(); ++i) {
    if (i % 2 == 0)
      out.A.values.push_back(scale * lls[i]);
    else
      out.B.values.push_back(-scale * lls[i]);
  }
  return out;
}

/// A named curve with observer and closed-form densities, for experiments
/// and cross-checks.
struct Preset {
  std::string name;
  ParamCurve curve;
  Vec2 O{0.0, 0.0};
  std::function<double(double)> A_closed;
  std::function<double(double)> B_closed;
  bool closed = false;  ///< curve returns to its start over [t_lo, t_hi]
};

/// Vertical line x = a traversed upward, observer at the origin.
/// A is the constant a; B vanishes identically.
inline Preset preset_line(double a, double t_lo = -5.0, double t_hi = 5.0) {
  if (!(t_lo < t_hi)) throw std::domain_error("preset_line: empty interval");
  Preset p;
  p.name = "line";
  p.curve.eval = [a](double t) { return Vec2{a, t}; };
  p.curve.deriv1 = [](double) { return Vec2{0.0, 1.0}; };
  p.curve.deriv2 = [](double) { return Vec2{0.0, 0.0}; };
  p.curve.t_lo = t_lo;
  p.curve.t_hi = t_hi;
  p.O = Vec2{0.0, 0.0};
  p.A_closed = [a](double) { return a; };
  p.B_closed = [](double) { return 0.0; };
  return p;
}

namespace detail {

inline ParamCurve ellipse_curve(double a, double b) {
  ParamCurve c;
  c.eval = [a, b](double t) { return Vec2{a * std::cos(t), b * std::sin(t)}; };
  c.deriv1 = [a, b](double t) { return Vec2{-a * std::sin(t), b * std::cos(t)}; };
  c.deriv2 = [a, b](double t) { return Vec2{-a * std::cos(t), -b * std::sin(t)}; };
  c.t_lo = 0.0;
  c.t_hi = 2.0 * std::acos(-1.0);
  return c;
}

}  // namespace detail

/// Ellipse with semi-axes a >= b > 0, observer at the center.
inline Preset preset_ellipse_center(double a, double b) {
  if (!(a >= b && b > 0)) throw std::domain_error("preset_ellipse_center: need a >= b > 0");
  Preset p;
  p.name = "ellipse_center";
  p.curve = detail::ellipse_curve(a, b);
  p.O = Vec2{0.0, 0.0};
  p.closed = true;
  p.A_closed = [a, b](double t) {
    return a * b / std::hypot(a * std::sin(t), b * std::cos(t));
  };
  p.B_closed = [a, b](double t) {
    return 1.0 / (a * b * std::hypot(a * std::sin(t), b * std::cos(t)));
  };
  return p;
}

/// Ellipse with semi-axes a >= b > 0, observer at the focus (-c, 0) with
/// c = sqrt(a^2 - b^2). The focal radius is a + c cos t.
inline Preset preset_ellipse_focus(double a, double b) {
  if (!(a >= b && b > 0)) throw std::domain_error("preset_ellipse_focus: need a >= b > 0");
  const double c = std::sqrt(a * a - b * b);
  Preset p;
  p.name = "ellipse_focus";
  p.curve = detail::ellipse_curve(a, b);
  p.O = Vec2{-c, 0.0};
  p.closed = true;
  p.A_closed = [a, b, c](double t) {
    return b * (a + c * std::cos(t)) / std::hypot(a * std::sin(t), b * std::cos(t));
  };
  p.B_closed = [a, b, c](double t) {
    const double r = a + c * std::cos(t);
    return a / (b * std::hypot(a * std::sin(t), b * std::cos(t)) * r * r);
  };
  return p;
}

/// Logarithmic spiral a e^{bt} (cos t, sin t), observer at the origin.
inline Preset preset_log_spiral(double a, double b, double t_lo = 0.0,
                                double t_hi = 2.0 * 3.14159265358979323846) {
  if (!(a > 0)) throw std::domain_error("preset_log_spiral: need a > 0");
  if (!(t_lo < t_hi)) throw std::domain_error("preset_log_spiral: empty interval");
  Preset p;
  p.name = "log_spiral";
  p.curve.eval = [a, b](double t) {
    const double r = a * std::exp(b * t);
    return Vec2{r * std::cos(t), r * std::sin(t)};
  };
  p.curve.deriv1 = [a, b](double t) {
    const double r = a * std::exp(b * t);
    return Vec2{r * (b * std::cos(t) - std::sin(t)),
                r * (b * std::sin(t) + std::cos(t))};
  };
  p.curve.deriv2 = [a, b](double t) {
    const double r = a * std::exp(b * t);
    return Vec2{r * ((b * b - 1) * std::cos(t) - 2 * b * std::sin(t)),
                r * ((b * b - 1) * std::sin(t) + 2 * b * std::cos(t))};
  };
  p.curve.t_lo = t_lo;
  p.curve.t_hi = t_hi;
  p.O = Vec2{0.0, 0.0};
  const double root = std::sqrt(b * b + 1.0);
  p.A_closed = [a, b, root](double t) { return a * std::exp(b * t) / root; };
  p.B_closed = [a, b, root](double t) {
    return std::exp(-3.0 * b * t) * root / (a * a * a);
  };
  return p;
}

inline Preset make_preset(const std::string& name, double a, double b,
                          double spiral_b) {
  if (name == "line") return preset_line(a);
  if (name == "ellipse_center") return preset_ellipse_center(a, b);
  if (name == "ellipse_focus") return preset_ellipse_focus(a, b);
  if (name == "log_spiral") return preset_log_spiral(a, spiral_b);
  throw std::domain_error("unknown preset: " + name);
}

/// Period scaling for focal ellipses. Given one reference orbit (semi-major
/// axis ref_a, period ref_period) the constant
///
///   lambda = ref_period / I * (a / ref_a)^{3/2}
///
/// rescales the angular-time integral I = integral of |1/A| ds over one
/// circuit of the target ellipse into its orbital period: period =
/// lambda * I. I is computed in the curve parameter,
/// I = integral (a^2 sin^2 t + b^2 cos^2 t) / (b (a + c cos t)) dt over a
/// full turn, which avoids inverting the arclength map.
struct KeplerLambdaResult {
  double lambda = 0.0;         ///< scaling constant
  double length = 0.0;         ///< arclength of one circuit
  double time_integral = 0.0;  ///< I for the target ellipse
  double period = 0.0;         ///< lambda * I
};

inline KeplerLambdaResult kepler_lambda(double a, double b, double ref_a,
                                        double ref_period) {
  if (!(a >= b && b > 0)) throw std::domain_error("kepler_lambda: need a >= b > 0");
  if (!(ref_a > 0) || !(ref_period > 0))
    throw std::domain_error("kepler_lambda: reference orbit must be positive");
  const double pi = std::acos(-1.0);
  const double c = std::sqrt(a * a - b * b);
  const double m = 1.0 - (b * b) / (a * a);
  KeplerLambdaResult out;
  out.length = 4.0 * a *
               integrate(
                   [m](double t) {
                     const double ct = std::cos(t);
                     return std::sqrt(1.0 - m * ct * ct);
                   },
                   0.0, 0.5 * pi);
  out.time_integral = integrate(
      [a, b, c](double t) {
        const double st = a * std::sin(t), ct = b * std::cos(t);
        return (st * st + ct * ct) / (b * (a + c * std::cos(t)));
      },
      0.0, 2.0 * pi);
  out.lambda = ref_period / out.time_integral * std::pow(a / ref_a, 1.5);
  out.period = out.lambda * out.time_integral;
  return out;
}

}  // namespace cfgeom
