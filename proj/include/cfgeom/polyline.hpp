#pragma once

/// @file polyline.hpp
/// Broken lines with an observation point O and their LLS data.
///
/// An LLS sequence e_0..e_{2n-2} for a broken line A_0..A_n alternates
///   even positions  e_{2k}   = area elements   alpha_k = det(A_k-O, A_{k+1}-O)
///   odd positions   e_{2k+1} = angle elements  beta_k
///                            = det(A_k-A_{k+1}, A_{k+2}-A_{k+1}) / (alpha_k*alpha_{k+1}),
/// all determinants oriented (counterclockwise positive). Area elements must
/// be nonzero: O and two consecutive vertices may never be collinear.
///
/// Synthesis inverts analysis exactly: build() then lls_of() returns the
/// input sequence, and the final vertex under the normalized frame
/// O=(0,0), A0=(1,0), v=(0,1) is (Q, P) for the sequence's continuant pair.
/// In particular the broken line closes up (A_n = A_0) iff (P, Q) = (0, 1).

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "continued_fraction.hpp"
#include "errors.hpp"
#include "projective.hpp"
#include "scalar.hpp"

namespace cfgeom {

template <Scalar S>
struct Point2 {
  S x{}, y{};
  friend bool operator==(const Point2&, const Point2&) = default;
};

template <Scalar S>
Point2<S> operator+(const Point2<S>& a, const Point2<S>& b) {
  return {a.x + b.x, a.y + b.y};
}
template <Scalar S>
Point2<S> operator-(const Point2<S>& a, const Point2<S>& b) {
  return {a.x - b.x, a.y - b.y};
}
template <Scalar S>
Point2<S> operator*(const S& c, const Point2<S>& p) {
  return {c * p.x, c * p.y};
}

/// Oriented parallelogram area of (u, v).
template <Scalar S>
S det2(const Point2<S>& u, const Point2<S>& v) {
  return u.x * v.y - u.y * v.x;
}

/// Row-major 2x2 matrix [[a, b], [c, d]].
template <Scalar S>
struct Mat2 {
  S a{}, b{}, c{}, d{};
  S det() const { return a * d - b * c; }
  Point2<S> apply(const Point2<S>& p) const {
    return {a * p.x + b * p.y, c * p.x + d * p.y};
  }
};

template <Scalar S>
struct Frame {
  Point2<S> O, A0, v;  // observation point, first vertex, first-edge direction
};

template <Scalar S>
struct Polyline {
  Point2<S> O;
  std::vector<Point2<S>> vertices;  // n+1 vertices for n edges
};

/// O = (0,0), A0 = (1,0), v = (0,1): the frame in which endpoint theorems
/// read off continuant pairs directly.
template <Scalar S>
Frame<S> normalized_frame() {
  return {{S(0), S(0)}, {S(1), S(0)}, {S(0), S(1)}};
}

/// Floating-mode tolerances; exact mode ignores them.
struct PolyTolerances {
  double collinearity = 1e-12;  // |det| at or below this is degenerate
  double closure = 1e-9;        // |P|, |Q-1| closure slack
};

namespace detail {
template <Scalar S>
bool negligible(const S& v, double tol) {
  if constexpr (is_exact_v<S>)
    return v == 0;
  else
    return std::fabs(v) <= tol;
}
}  // namespace detail

/// Odd length, nonzero area elements (even positions).
template <Scalar S>
void validate_lls(const CFSequence<S>& lls, const PolyTolerances& tol = {}) {
  if (lls.empty() || lls.size() % 2 == 0)
    throw std::domain_error("LLS sequence must have odd length >= 1");
  for (std::size_t i = 0; i < lls.size(); i += 2)
    if (detail::negligible(lls[i], tol.collinearity))
      throw std::domain_error("LLS area element at position " + std::to_string(i) +
                              " is zero");
}

/// Reconstructs the broken line determined by a frame and an LLS sequence.
///
/// A_1 = A_0 + lambda*v with lambda = alpha_0 / det(A_0-O, v), and for k >= 1
///   P       = A_k + (1/alpha_{k-1}) (A_k - A_{k-1})   [det(A_k-O, P-O) = 1]
///   Q       = P + beta_{k-1} (A_k - O)
///   A_{k+1} = A_k + alpha_k (Q - A_k).
template <Scalar S>
Polyline<S> build(const Frame<S>& frame, const CFSequence<S>& lls,
                  const PolyTolerances& tol = {}) {
  validate_lls(lls, tol);
  const S d0 = det2<S>(frame.A0 - frame.O, frame.v);
  if (detail::negligible(d0, tol.collinearity))
    throw std::domain_error("degenerate frame: O, A0 and v are collinear");

  const std::size_t n = (lls.size() + 1) / 2;  // edge count
  Polyline<S> out;
  out.O = frame.O;
  out.vertices.reserve(n + 1);
  out.vertices.push_back(frame.A0);

  const S lambda = lls[0] / d0;
  out.vertices.push_back(frame.A0 + lambda * frame.v);

  for (std::size_t k = 1; k < n; ++k) {
    const S& alpha_prev = lls[2 * (k - 1)];
    const S& beta_prev = lls[2 * k - 1];
    const S& alpha_k = lls[2 * k];
    const Point2<S>& a_prev = out.vertices[k - 1];
    const Point2<S>& a_k = out.vertices[k];
    const Point2<S> p = a_k + (S(1) / alpha_prev) * (a_k - a_prev);
    const Point2<S> q = p + beta_prev * (a_k - frame.O);
    out.vertices.push_back(a_k + alpha_k * (q - a_k));
  }
  return out;
}

/// Extracts the LLS sequence of a broken line; inverse of build().
template <Scalar S>
CFSequence<S> lls_of(const Polyline<S>& poly, const PolyTolerances& tol = {}) {
  if (poly.vertices.size() < 2)
    throw std::domain_error("lls_of: polyline needs at least one edge");
  const std::size_t n = poly.vertices.size() - 1;
  std::vector<S> areas;
  areas.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    S a = det2<S>(poly.vertices[k] - poly.O, poly.vertices[k + 1] - poly.O);
    if (detail::negligible(a, tol.collinearity))
      throw DegeneratePolylineError("collinear O, A_k, A_{k+1}", static_cast<int>(k));
    areas.push_back(std::move(a));
  }
  CFSequence<S> lls;
  lls.reserve(2 * n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) {
      const S turn = det2<S>(poly.vertices[k - 1] - poly.vertices[k],
                             poly.vertices[k + 1] - poly.vertices[k]);
      lls.push_back(turn / (areas[k - 1] * areas[k]));
    }
    lls.push_back(areas[k]);
  }
  return lls;
}

/// Applies M to the vertices and to O alike. With det(M) = lambda, image
/// area elements are lambda * (original) and angle elements (1/lambda) *
/// (original); for lambda = 1 the LLS data is untouched.
template <Scalar S>
Polyline<S> transform(const Polyline<S>& poly, const Mat2<S>& m,
                      const PolyTolerances& tol = {}) {
  if (detail::negligible(m.det(), tol.collinearity))
    throw std::domain_error("transform: singular matrix");
  Polyline<S> out;
  out.O = m.apply(poly.O);
  out.vertices.reserve(poly.vertices.size());
  for (const Point2<S>& v : poly.vertices) out.vertices.push_back(m.apply(v));
  return out;
}

/// Canonical projective (P : Q) of the full sequence. The raw recurrence
/// pair (use final_continuant for it) equals the endpoint coordinates
/// swapped: build(normalized_frame, lls) ends exactly at (Q, P).
inline ProjectiveRatio endpoint_pair(const CFSequence<Rat>& lls) {
  validate_lls(lls);
  auto [p, q] = final_continuant(lls);
  return ProjectiveRatio::from_pair(p, q);
}

/// Closure predicate: the full continuant pair equals (0, 1).
template <Scalar S>
bool is_closed(const CFSequence<S>& lls, const PolyTolerances& tol = {}) {
  validate_lls(lls, tol);
  const auto [p, q] = final_continuant(lls);
  if constexpr (is_exact_v<S>)
    return p == 0 && q == 1;
  else
    return std::fabs(p) <= tol.closure && std::fabs(q - 1) <= tol.closure;
}

/// True iff the two sequences evaluate to the same projective value, i.e.
/// broken lines built from a shared frame end collinear with O.
inline bool collinear_endpoints(const CFSequence<Rat>& lls1,
                                const CFSequence<Rat>& lls2) {
  validate_lls(lls1);
  validate_lls(lls2);
  return eval_cf(lls1) == eval_cf(lls2);
}

inline bool collinear_endpoints(const CFSequence<double>& lls1,
                                const CFSequence<double>& lls2,
                                const PolyTolerances& tol = {}) {
  validate_lls(lls1, tol);
  validate_lls(lls2, tol);
  auto [p1, q1] = eval_cf_approx(lls1);
  auto [p2, q2] = eval_cf_approx(lls2);
  const double h1 = std::hypot(p1, q1), h2 = std::hypot(p2, q2);
  return std::fabs((p1 / h1) * (q2 / h2) - (q1 / h1) * (p2 / h2)) <= tol.closure;
}

}  // namespace cfgeom
