#pragma once

/// @file serialize.hpp
/// JSON and CSV encodings shared by the command line tool and the tests.
///
/// Exact scalars travel as "p/q" strings (plain "p" for integers) so that
/// arbitrary-precision values survive the trip; floating scalars travel as
/// decimal text with enough digits to round-trip. Lattice coordinates are
/// emitted as JSON numbers when they fit in 64 bits and as strings
/// otherwise.

#include <cctype>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "continued_fraction.hpp"
#include "curve_density.hpp"
#include "kepler_reconstruct.hpp"
#include "lattice_sail.hpp"
#include "polyline.hpp"
#include "projective.hpp"
#include "scalar.hpp"

namespace cfgeom {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// scalar tokens

inline std::string trim_copy(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

/// True for tokens that only make sense in floating mode ("0.5", "1e-3").
inline bool token_is_decimal(const std::string& tok) {
  for (char ch : tok)
    if (ch == '.' || ch == 'e' || ch == 'E') return true;
  return false;
}

inline double parse_double_token(const std::string& tok) {
  const std::string t = trim_copy(tok);
  if (t.empty()) throw std::domain_error("empty numeric token");
  // Accept "p/q" in floating mode too.
  const size_t slash = t.find('/');
  if (slash != std::string::npos) {
    const Rat r = parse_rational(t);
    return to_double(r);
  }
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw std::domain_error("bad numeric token: " + t);
  }
  if (pos != t.size()) throw std::domain_error("bad numeric token: " + t);
  return v;
}

inline std::vector<std::string> split_list(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(trim_copy(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(trim_copy(cur));
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

inline CFSequence<Rat> parse_rat_sequence(const std::string& csv) {
  CFSequence<Rat> seq;
  for (const std::string& tok : split_list(csv)) seq.push_back(parse_rational(tok));
  if (seq.empty()) throw std::domain_error("empty sequence");
  return seq;
}

inline CFSequence<double> parse_double_sequence(const std::string& csv) {
  CFSequence<double> seq;
  for (const std::string& tok : split_list(csv)) seq.push_back(parse_double_token(tok));
  if (seq.empty()) throw std::domain_error("empty sequence");
  return seq;
}

// ---------------------------------------------------------------------------
// JSON encodings

inline Json to_json(const CFSequence<Rat>& seq) {
  Json arr = Json::array();
  for (const Rat& a : seq) arr.push_back(format_scalar(a));
  return arr;
}

inline Json to_json(const CFSequence<double>& seq) {
  Json arr = Json::array();
  for (double a : seq) arr.push_back(a);
  return arr;
}

inline Json to_json(const ProjectiveRatio& pr) {
  return Json{{"p", pr.p().str()}, {"q", pr.q().str()}};
}

inline Json to_json(const std::vector<ContinuantPair<Rat>>& pairs) {
  Json arr = Json::array();
  for (const auto& c : pairs)
    arr.push_back(Json{{"p", format_scalar(c.p)}, {"q", format_scalar(c.q)}});
  return arr;
}

namespace detail {

inline Json int_token(const Int& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() &&
      v <= std::numeric_limits<std::int64_t>::max())
    return Json(static_cast<std::int64_t>(v));
  return Json(v.str());
}

}  // namespace detail

inline Json to_json(const SailResult& sail) {
  Json verts = Json::array();
  for (const LatticePoint& v : sail.vertices)
    verts.push_back(Json::array({detail::int_token(v.x), detail::int_token(v.y)}));
  Json lls = Json::array();
  for (const Rat& e : sail.lls) lls.push_back(detail::int_token(numerator(e)));
  return Json{{"vertices", verts}, {"lls", lls}};
}

inline Json to_json(const Polyline<Rat>& poly) {
  Json verts = Json::array();
  for (const auto& v : poly.vertices)
    verts.push_back(Json::array({format_scalar(v.x), format_scalar(v.y)}));
  return Json{{"O", Json::array({format_scalar(poly.O.x), format_scalar(poly.O.y)})},
              {"vertices", verts}};
}

inline Json to_json(const Polyline<double>& poly) {
  Json verts = Json::array();
  for (const auto& v : poly.vertices) verts.push_back(Json::array({v.x, v.y}));
  return Json{{"O", Json::array({poly.O.x, poly.O.y})}, {"vertices", verts}};
}

// ---------------------------------------------------------------------------
// CSV encodings

inline void write_csv(std::ostream& os, const SailResult& sail) {
  os << "x,y\n";
  for (const LatticePoint& v : sail.vertices) os << v.x.str() << ',' << v.y.str() << '\n';
}

template <Scalar S>
void write_csv(std::ostream& os, const Polyline<S>& poly) {
  os << "x,y\n";
  for (const auto& v : poly.vertices)
    os << format_scalar(v.x) << ',' << format_scalar(v.y) << '\n';
}

struct DensityRow {
  double t, x, y, A, B, kappa;
};

inline void write_csv(std::ostream& os, const std::vector<DensityRow>& rows) {
  os << "t,x,y,A,B,kappa\n";
  for (const DensityRow& r : rows)
    os << format_scalar(r.t) << ',' << format_scalar(r.x) << ',' << format_scalar(r.y)
       << ',' << format_scalar(r.A) << ',' << format_scalar(r.B) << ','
       << format_scalar(r.kappa) << '\n';
}

inline Json to_json(const std::vector<DensityRow>& rows) {
  Json arr = Json::array();
  for (const DensityRow& r : rows)
    arr.push_back(Json{{"t", r.t},
                       {"x", r.x},
                       {"y", r.y},
                       {"A", r.A},
                       {"B", r.B},
                       {"kappa", r.kappa}});
  return arr;
}

inline void write_csv(std::ostream& os, const std::vector<ReconSample>& rows) {
  os << "t,x,y,r,phi,branch\n";
  for (const ReconSample& r : rows)
    os << format_scalar(r.t) << ',' << format_scalar(r.x) << ',' << format_scalar(r.y)
       << ',' << format_scalar(r.r) << ',' << format_scalar(r.phi) << ',' << r.branch
       << '\n';
}

inline Json to_json(const std::vector<ReconSample>& rows) {
  Json arr = Json::array();
  for (const ReconSample& r : rows)
    arr.push_back(Json{{"t", r.t},
                       {"x", r.x},
                       {"y", r.y},
                       {"r", r.r},
                       {"phi", r.phi},
                       {"branch", r.branch}});
  return arr;
}

// ---------------------------------------------------------------------------
// CSV parsing

/// Reads "x,y" rows; a first row whose cells are not numeric is treated as
/// the header and skipped. Returns raw cell text so the caller can decide
/// exact vs floating parsing.
inline std::vector<std::pair<std::string, std::string>> read_xy_csv(std::istream& is) {
  std::vector<std::pair<std::string, std::string>> rows;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    const std::string t = trim_copy(line);
    if (t.empty()) continue;
    const std::vector<std::string> cells = split_list(t);
    if (cells.size() != 2) throw std::domain_error("expected two columns: " + t);
    if (first) {
      first = false;
      bool header = false;
      for (const std::string& c : cells) {
        try {
          parse_double_token(c);
        } catch (const std::domain_error&) {
          header = true;
        }
      }
      if (header) continue;
    }
    rows.emplace_back(cells[0], cells[1]);
  }
  return rows;
}

/// Piecewise-linear interpolant through a (t, A) table, for feeding tabulated
/// density histories into the reconstruction runner. Outside the table range
/// the boundary values extend constantly.
struct LinearTable {
  std::vector<double> t, v;

  static LinearTable from_rows(
      const std::vector<std::pair<std::string, std::string>>& rows) {
    LinearTable tab;
    for (const auto& [a, b] : rows) {
      tab.t.push_back(parse_double_token(a));
      tab.v.push_back(parse_double_token(b));
    }
    if (tab.t.size() < 2) throw std::domain_error("table needs at least two rows");
    for (size_t i = 1; i < tab.t.size(); ++i)
      if (!(tab.t[i] > tab.t[i - 1]))
        throw std::domain_error("table abscissae must increase strictly");
    return tab;
  }

  double operator()(double x) const {
    if (x <= t.front()) return v.front();
    if (x >= t.back()) return v.back();
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    const size_t i = (it - t.begin()) - 1;
    const double w = (x - t[i]) / (t[i + 1] - t[i]);
    return v[i] + w * (v[i + 1] - v[i]);
  }
};

}  // namespace cfgeom
