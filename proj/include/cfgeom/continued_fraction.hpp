#pragma once

/// @file continued_fraction.hpp
/// Continued fractions [a0, a1, ...] with arbitrary elements.
///
/// The value of a finite fraction is carried by its continuant pair (P, Q),
/// computed by the three-term recurrence
///
///   P_k = a_k * P_{k-1} + P_{k-2},   Q_k = a_k * Q_{k-1} + Q_{k-2},
///
/// with seeds P_{-1} = 1, P_{-2} = 0, Q_{-1} = 0, Q_{-2} = 1. Key invariant,
/// valid for *any* elements (zeros and rationals included):
///
///   P_k * Q_{k-1} - P_{k-1} * Q_k = (-1)^{k+1},
///
/// so (P_k, Q_k) is never (0, 0) and the value [a0..ak] = P_k / Q_k is a
/// well-defined projective ratio even when a prefix evaluates to infinity.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "projective.hpp"
#include "scalar.hpp"

namespace cfgeom {

template <Scalar S>
using CFSequence = std::vector<S>;

/// Raw (un-normalized) continuant pair. The recurrence values themselves
/// matter, not only their ratio: broken-line endpoints are literally (Q, P).
template <Scalar S>
struct ContinuantPair {
  S p, q;
  friend bool operator==(const ContinuantPair&, const ContinuantPair&) = default;
};

/// Continuant pairs of every prefix [a0..ak], k = 0..len-1.
template <Scalar S>
std::vector<ContinuantPair<S>> continuants(const CFSequence<S>& seq) {
  if (seq.empty()) throw std::domain_error("continuants: empty sequence");
  std::vector<ContinuantPair<S>> out;
  out.reserve(seq.size());
  S p_prev2(0), p_prev(1);  // P_{-2}, P_{-1}
  S q_prev2(1), q_prev(0);  // Q_{-2}, Q_{-1}
  for (const S& a : seq) {
    S p = a * p_prev + p_prev2;
    S q = a * q_prev + q_prev2;
    out.push_back({p, q});
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
  }
  return out;
}

/// (P, Q) of the full sequence without materializing every prefix.
template <Scalar S>
ContinuantPair<S> final_continuant(const CFSequence<S>& seq) {
  if (seq.empty()) throw std::domain_error("final_continuant: empty sequence");
  S p_prev2(0), p_prev(1), q_prev2(1), q_prev(0);
  for (const S& a : seq) {
    S p = a * p_prev + p_prev2;
    S q = a * q_prev + q_prev2;
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
  }
  return {p_prev, q_prev};
}

/// Exact value of the fraction; (1, 0) encodes infinity.
inline ProjectiveRatio eval_cf(const CFSequence<Rat>& seq) {
  auto [p, q] = final_continuant(seq);
  return ProjectiveRatio::from_pair(p, q);
}

/// Floating evaluation. The pair is rescaled whenever it grows too large, so
/// the ratio stays meaningful for long sequences; p/q may be +-inf.
inline ContinuantPair<double> eval_cf_approx(const CFSequence<double>& seq) {
  if (seq.empty()) throw std::domain_error("eval_cf_approx: empty sequence");
  double p_prev2 = 0, p_prev = 1, q_prev2 = 1, q_prev = 0;
  constexpr double kRescaleAt = 1e150;
  for (double a : seq) {
    double p = a * p_prev + p_prev2;
    double q = a * q_prev + q_prev2;
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
    double m = std::max(std::fabs(p_prev), std::fabs(q_prev));
    if (m > kRescaleAt) {
      p_prev /= m;
      q_prev /= m;
      p_prev2 /= m;
      q_prev2 /= m;
    }
  }
  return {p_prev, q_prev};
}

enum class Parity { odd, even };

/// Ordinary continued fraction of x with the requested element count parity.
///
/// The floor expansion either has a single element or ends with an element
/// >= 2, so the parity flip [..., a] = [..., a-1, 1] always yields a valid
/// ordinary fraction (all elements past the first stay positive). Every
/// rational therefore has exactly one odd and one even ordinary expansion.
inline std::vector<Int> expand_rational(const Rat& x, Parity parity) {
  std::vector<Int> terms;
  Rat r = x;
  for (;;) {
    Int a = rat_floor(r);
    terms.push_back(a);
    Rat frac = r - Rat(a);
    if (frac == 0) break;
    r = Rat(1) / frac;  // frac in (0,1), so r > 1 and the next term is >= 1
  }
  const bool want_odd = (parity == Parity::odd);
  if ((terms.size() % 2 == 1) != want_odd) {
    terms.back() -= 1;
    terms.push_back(1);
  }
  return terms;
}

/// Prefix of the ordinary expansion of a real number by floor/reciprocal.
///
/// Stops after max_terms elements or once the fractional part drops below
/// tol. The floor is taken with a +tol fuzz so that values which are
/// integers up to accumulated roundoff (e.g. 1/0.4) do not spawn a spurious
/// [..., 1, huge] tail. The prefix [a0..ak] = p/q of a regular expansion
/// satisfies |x - p/q| <= 1/q^2.
inline std::vector<Int> expand_real(double x, int max_terms, double tol) {
  if (!std::isfinite(x)) throw std::domain_error("expand_real: non-finite input");
  if (max_terms < 1) throw std::domain_error("expand_real: max_terms must be >= 1");
  if (!(tol > 0)) throw std::domain_error("expand_real: tol must be positive");
  const double fuzz = std::min(tol, 0.49);
  std::vector<Int> terms;
  double v = x;
  for (int i = 0; i < max_terms; ++i) {
    double a = std::floor(v + fuzz);
    terms.push_back(Int(a));
    double frac = v - a;  // > -fuzz by construction
    if (frac <= fuzz) break;
    v = 1.0 / frac;
  }
  return terms;
}

inline CFSequence<Rat> to_rational_sequence(const std::vector<Int>& terms) {
  CFSequence<Rat> seq;
  seq.reserve(terms.size());
  for (const Int& t : terms) seq.emplace_back(t);
  return seq;
}

inline CFSequence<double> to_double_sequence(const std::vector<Int>& terms) {
  CFSequence<double> seq;
  seq.reserve(terms.size());
  for (const Int& t : terms) seq.push_back(t.convert_to<double>());
  return seq;
}

}  // namespace cfgeom
