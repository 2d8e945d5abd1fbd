#pragma once

/// @file lattice_sail.hpp
/// Integer trigonometry and sails of planar cones.
///
/// The cone C_alpha is spanned by the rays {(t, 0)} and {(t, alpha*t)},
/// t >= 0, for rational alpha >= 1. Its sail is the broken-line part of the
/// boundary of conv(integer points of C_alpha minus the origin); reading the
/// sail's edge integer lengths and vertex integer sines off as an alternating
/// sequence recovers alpha as a continued fraction.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "continued_fraction.hpp"
#include "errors.hpp"
#include "scalar.hpp"

namespace cfgeom {

struct LatticePoint {
  Int x, y;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

/// gcd of coordinate deltas = number of interior integer points plus one.
inline Int integer_length(const LatticePoint& a, const LatticePoint& b) {
  if (a == b) throw std::domain_error("integer_length: coincident endpoints");
  return boost::multiprecision::gcd(b.x - a.x, b.y - a.y);
}

namespace detail {

inline Int cross(const LatticePoint& o, const LatticePoint& a, const LatticePoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Counterclockwise convex hull (Andrew monotone chain); collinear points
/// are dropped, so consecutive hull edges make strict turns.
inline std::vector<LatticePoint> convex_hull(std::vector<LatticePoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const LatticePoint& a, const LatticePoint& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return pts;
  std::vector<LatticePoint> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower hull
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper hull
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);  // last point equals the first
  return hull;
}

}  // namespace detail

/// Lattice index of the sublattice spanned by the primitive vectors along
/// B->A and B->C: |det| of the primitive pair. Symmetric in A and C.
inline Int integer_sine(const LatticePoint& a, const LatticePoint& b,
                        const LatticePoint& c) {
  if (a == b || c == b) throw std::domain_error("integer_sine: coincident points");
  Int ux = a.x - b.x, uy = a.y - b.y;
  Int vx = c.x - b.x, vy = c.y - b.y;
  Int gu = boost::multiprecision::gcd(ux, uy);
  Int gv = boost::multiprecision::gcd(vx, vy);
  Int d = (ux / gu) * (vy / gv) - (uy / gu) * (vx / gv);
  if (d == 0) throw CollinearError("integer_sine: collinear triple");
  return boost::multiprecision::abs(d);
}

struct ConeSpec {
  Rat alpha;  // >= 1; rays {(t, 0)} and {(t, alpha*t)}
};

struct SailResult {
  std::vector<LatticePoint> vertices;  // ordered from (1,0) to (q,p)
  CFSequence<Rat> lls;                 // interleaved lengths and sines
};

/// Interleaved (length, sine, length, ...) sequence of a vertex chain;
/// 2m-1 elements for m edges. Elements are integers, carried as rationals
/// so the sequence can feed continued-fraction evaluation directly.
inline CFSequence<Rat> lls_of_sail(const std::vector<LatticePoint>& vertices) {
  if (vertices.size() < 2)
    throw std::domain_error("lls_of_sail: need at least one edge");
  CFSequence<Rat> lls;
  lls.reserve(2 * vertices.size() - 3);
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    if (i > 0)
      lls.emplace_back(integer_sine(vertices[i - 1], vertices[i], vertices[i + 1]));
    lls.emplace_back(integer_length(vertices[i], vertices[i + 1]));
  }
  return lls;
}

inline CFSequence<Rat> lls_of_sail(const SailResult& s) { return lls_of_sail(s.vertices); }

/// Sail of C_alpha for rational alpha = p/q >= 1 (lowest terms).
///
/// Implementation: enumerate integer cone points inside the bounding box
/// [0,q] x [0,p], add one far sentinel per ray (parameter p*q + 2) so the
/// hull closes on the far side, and read the origin-facing chain off the
/// counterclockwise hull cycle between the sentinels. The chain always runs
/// from (1,0) to (q,p). Enumeration is restricted to points on the origin
/// side of the chord (1,0)-(q,p): the chain lies in the region bounded by
/// that chord and the two rays (the hull contains the chord), so points
/// beyond it cannot appear on, or displace, the origin-facing chain. That
/// cuts the candidate set from O(p*q) to O(p+q) points.
inline SailResult sail(const ConeSpec& cone) {
  if (cone.alpha < 1)
    throw std::domain_error("sail: alpha must be >= 1 (expand smaller values instead)");
  const Int p = numerator(cone.alpha), q = denominator(cone.alpha);
  const Int sentinel_t = p * q + 2;
  const LatticePoint s1{sentinel_t, 0};
  const LatticePoint s2{sentinel_t * q, sentinel_t * p};

  std::vector<LatticePoint> pts;
  for (Int x = 1; x <= q; ++x) {
    const Int y_hi = floor_div(p * x, q);                          // inside the cone
    const Int y_lo = (q == 1) ? Int(0) : ceil_div(p * (x - 1), q - 1);  // origin side
    for (Int y = y_lo; y <= y_hi; ++y) pts.push_back({x, y});
  }
  pts.push_back(s1);
  pts.push_back(s2);

  const std::vector<LatticePoint> hull = detail::convex_hull(std::move(pts));
  const std::size_t n = hull.size();
  std::size_t i1 = n, i2 = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (hull[i] == s1) i1 = i;
    if (hull[i] == s2) i2 = i;
  }
  if (i1 == n || i2 == n || (i1 + 1) % n != i2)
    throw NumericalError("sail: sentinel edge missing from hull");

  // Counterclockwise cycle is (1,0), s1, s2, (q,p), ..., back to (1,0);
  // the arc after s2 is the sail traversed from (q,p) down to (1,0).
  SailResult result;
  for (std::size_t i = (i2 + 1) % n; i != i1; i = (i + 1) % n)
    result.vertices.push_back(hull[i]);
  std::reverse(result.vertices.begin(), result.vertices.end());

  if (result.vertices.size() < 2 ||
      !(result.vertices.front() == LatticePoint{1, 0}) ||
      !(result.vertices.back() == LatticePoint{q, p}))
    throw NumericalError("sail: chain endpoints are not (1,0) and (q,p)");
  result.lls = lls_of_sail(result.vertices);
  return result;
}

}  // namespace cfgeom
