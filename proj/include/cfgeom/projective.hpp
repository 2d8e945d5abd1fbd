#pragma once

/// @file projective.hpp
/// Canonical projective values p : q on the rational projective line.
///
/// A continued fraction with arbitrary elements can pass through, or end at,
/// infinity; representing values projectively makes evaluation total. The
/// canonical form is coprime with q >= 0, and q = 0 forces p = 1, so there
/// is exactly one representation per value and operator== is exact.

#include <stdexcept>
#include <string>
#include <utility>

#include "scalar.hpp"

namespace cfgeom {

class ProjectiveRatio {
 public:
  ProjectiveRatio() : p_(0), q_(1) {}

  ProjectiveRatio(Int p, Int q) : p_(std::move(p)), q_(std::move(q)) {
    if (p_ == 0 && q_ == 0)
      throw std::domain_error("projective value requires (p, q) != (0, 0)");
    Int g = boost::multiprecision::gcd(p_, q_);  // gcd of magnitudes, >= 0
    p_ /= g;
    q_ /= g;
    if (q_ < 0) {
      p_ = -p_;
      q_ = -q_;
    } else if (q_ == 0) {
      p_ = 1;  // the single point at infinity
    }
  }

  explicit ProjectiveRatio(const Rat& value)
      : ProjectiveRatio(numerator(value), denominator(value)) {}

  /// Projectivizes a raw rational pair by clearing denominators.
  static ProjectiveRatio from_pair(const Rat& p, const Rat& q) {
    return ProjectiveRatio(numerator(p) * denominator(q),
                           numerator(q) * denominator(p));
  }

  static ProjectiveRatio infinity() { return ProjectiveRatio(1, 0); }

  const Int& p() const { return p_; }
  const Int& q() const { return q_; }
  bool is_infinite() const { return q_ == 0; }

  /// Finite value as a rational; infinity is rejected.
  Rat value() const {
    if (is_infinite()) throw std::domain_error("projective value is infinite");
    return Rat(p_, q_);
  }

  std::string str() const { return p_.str() + "/" + q_.str(); }

  friend bool operator==(const ProjectiveRatio& a, const ProjectiveRatio& b) {
    return a.p_ == b.p_ && a.q_ == b.q_;
  }
  friend bool operator!=(const ProjectiveRatio& a, const ProjectiveRatio& b) {
    return !(a == b);
  }

 private:
  Int p_, q_;  // coprime, q_ >= 0, q_ == 0 => p_ == 1
};

}  // namespace cfgeom
