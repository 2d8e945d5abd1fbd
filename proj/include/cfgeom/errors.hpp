#pragma once

#include <stdexcept>
#include <string>

namespace cfgeom {

// Error taxonomy: geometric degeneracies and precondition violations are
// domain errors; integrator/quadrature breakdowns are numerical errors.
// The CLI maps std::domain_error (and subclasses) to exit 2 and
// NumericalError to exit 3.

/// Three points that must span an angle are collinear (or two coincide).
struct CollinearError : std::domain_error {
  explicit CollinearError(const std::string& what) : std::domain_error(what) {}
};

/// A polyline triple (O, A_k, A_{k+1}) is collinear; `index` is k.
struct DegeneratePolylineError : std::domain_error {
  int index;
  DegeneratePolylineError(const std::string& what, int k)
      : std::domain_error(what + " at edge " + std::to_string(k)), index(k) {}
};

/// Quadrature failed to converge, an integration step underflowed, or input
/// data is inconsistent with any solution (e.g. negative ODE radicand).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cfgeom
