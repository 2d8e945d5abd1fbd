#pragma once

/// @file scalar.hpp
/// Scalar types shared by the whole library.
///
/// Exact paths run on arbitrary-precision rationals (`Rat`), floating paths
/// on `double`. `Rat` is kept canonical by its backend: denominator > 0 and
/// gcd(|num|, den) = 1 after every operation, so closure predicates such as
/// "P = 0 and Q = 1" are exact statements, never tolerance checks.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace cfgeom {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

template <class S>
concept Scalar = std::is_same_v<S, Rat> || std::is_same_v<S, double>;

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, Rat>;

/// Floor division toward -infinity; `Int` division truncates toward zero.
inline Int floor_div(const Int& n, const Int& d) {
  Int q = n / d;
  if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
  return q;
}

/// Ceiling division toward +infinity.
inline Int ceil_div(const Int& n, const Int& d) { return -floor_div(-n, d); }

inline Int rat_floor(const Rat& x) {
  return floor_div(numerator(x), denominator(x));
}

inline double to_double(const Rat& x) { return x.template convert_to<double>(); }

inline bool is_integer(const Rat& x) { return denominator(x) == 1; }

/// Parses "p", "-p" or "p/q". Denominator must be nonzero.
inline Rat parse_rational(std::string_view text) {
  const auto bad = [&] {
    throw std::domain_error("not a rational: '" + std::string(text) + "'");
  };
  const auto slash = text.find('/');
  const auto parse_int = [&](std::string_view part) -> Int {
    if (part.empty()) bad();
    std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (i == part.size()) bad();
    for (std::size_t k = i; k < part.size(); ++k)
      if (part[k] < '0' || part[k] > '9') bad();
    return Int(std::string(part));
  };
  if (slash == std::string_view::npos) return Rat(parse_int(text));
  Int num = parse_int(text.substr(0, slash));
  Int den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::domain_error("zero denominator: '" + std::string(text) + "'");
  return Rat(num, den);
}

/// "p" for integers, "p/q" otherwise.
inline std::string format_scalar(const Rat& x) {
  std::string s = numerator(x).str();
  if (denominator(x) != 1) s += "/" + denominator(x).str();
  return s;
}

/// Shortest-ish round-trippable decimal.
inline std::string format_scalar(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace cfgeom
