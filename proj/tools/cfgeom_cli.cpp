// cfgeom command line front end.
//
// Subcommand groups mirror the library modules:
//
//   cf          eval | expand | continuants
//   sail        compute
//   polyline    build | lls | closed | transform | endpoint
//   density     sample | discretize | sector | kepler-lambda
//   reconstruct run | roundtrip
//   paper       repro
//
// Exit codes: 0 success, 1 repro failure, 2 bad input (domain errors),
// 3 numerical breakdown.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cfgeom/cfgeom.hpp"

using namespace cfgeom;

namespace {

// ---------------------------------------------------------------------------
// configuration

struct CliConfig {
  std::string mode;            // "", "exact" or "float"
  std::string output = "csv";  // "csv" or "json"
  long seed = 0;               // reserved for randomized demos
  PolyTolerances ptol;
  double switch_tol = 1e-9;
};

void apply_config_file(CliConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("cannot open config file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw std::domain_error("bad config JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw std::domain_error("config root must be an object");
  for (const auto& [key, val] : j.items()) {
    if (key == "mode") {
      cfg.mode = val.get<std::string>();
      if (cfg.mode != "exact" && cfg.mode != "float")
        throw std::domain_error("config mode must be 'exact' or 'float'");
    } else if (key == "output") {
      cfg.output = val.get<std::string>();
      if (cfg.output != "csv" && cfg.output != "json")
        throw std::domain_error("config output must be 'csv' or 'json'");
    } else if (key == "seed") {
      cfg.seed = val.get<long>();
    } else if (key == "tolerances") {
      if (!val.is_object()) throw std::domain_error("config tolerances must be an object");
      for (const auto& [tk, tv] : val.items()) {
        if (tk == "collinearity")
          cfg.ptol.collinearity = tv.get<double>();
        else if (tk == "closure")
          cfg.ptol.closure = tv.get<double>();
        else if (tk == "switch_tol")
          cfg.switch_tol = tv.get<double>();
        else
          throw std::domain_error("unknown tolerance in config: " + tk);
      }
    } else {
      throw std::domain_error("unknown key in config: " + key);
    }
  }
}

// ---------------------------------------------------------------------------
// exact / floating mode resolution

bool any_decimal(const std::vector<std::string>& chunks) {
  for (const std::string& c : chunks)
    for (const std::string& tok : split_list(c))
      if (token_is_decimal(tok)) return true;
  return false;
}

/// Decimal literals force floating mode; --mode exact turns them into an
/// error instead of silently rounding.
bool use_exact(const CliConfig& cfg, const std::vector<std::string>& chunks) {
  const bool dec = any_decimal(chunks);
  if (cfg.mode == "exact") {
    if (dec) throw std::domain_error("decimal literal not representable in exact mode");
    return true;
  }
  if (cfg.mode == "float") return false;
  return !dec;
}

void emit(const CliConfig& cfg, const Json& j, const std::string& csv) {
  if (cfg.output == "json")
    std::cout << j.dump(2) << "\n";
  else
    std::cout << csv;
}

std::string join_scalars(const CFSequence<Rat>& seq) {
  std::string out;
  for (size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ",";
    out += format_scalar(seq[i]);
  }
  return out;
}

std::string join_scalars(const CFSequence<double>& seq) {
  std::string out;
  for (size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ",";
    out += format_scalar(seq[i]);
  }
  return out;
}

template <Scalar S>
Point2<S> parse_point(const std::string& text) {
  const std::vector<std::string> cells = split_list(text);
  if (cells.size() != 2) throw std::domain_error("expected 'x,y': " + text);
  if constexpr (is_exact_v<S>)
    return {parse_rational(cells[0]), parse_rational(cells[1])};
  else
    return {parse_double_token(cells[0]), parse_double_token(cells[1])};
}

template <Scalar S>
Frame<S> parse_frame(const std::string& text) {
  if (text.empty()) return normalized_frame<S>();
  const std::vector<std::string> parts = split_list(text, ';');
  if (parts.size() != 3)
    throw std::domain_error("frame must be 'Ox,Oy;A0x,A0y;vx,vy': " + text);
  return {parse_point<S>(parts[0]), parse_point<S>(parts[1]), parse_point<S>(parts[2])};
}

// ---------------------------------------------------------------------------
// preset plumbing shared by density and reconstruct groups

struct PresetArgs {
  std::string name;
  double a = 2.0;
  double b = 1.0;
  double spiral_b = 0.1;
};

void add_preset_options(CLI::App* cmd, PresetArgs& pa) {
  cmd->add_option("--preset", pa.name, "line | ellipse_center | ellipse_focus | log_spiral")
      ->required();
  cmd->add_option("--a", pa.a, "first curve parameter (line offset / semi-major axis / spiral scale)");
  cmd->add_option("--b", pa.b, "semi-minor axis (ellipses)");
  cmd->add_option("--spiral-b", pa.spiral_b, "log spiral growth rate");
}

/// Density history and start state read off a preset at arclength s0, the
/// same construction roundtrip_error uses.
ReconstructionSpec preset_spec(const Preset& preset, double s0, double span,
                               double step, double switch_tol) {
  const ParamCurve arc = by_arclength(preset.curve);
  const double L = arc.t_hi;
  if (!(s0 >= 0.0 && s0 <= L))
    throw std::domain_error("s0 outside the curve domain");
  if (!preset.closed && s0 + span > L * (1.0 + 1e-12))
    throw std::domain_error("span leaves the curve domain");
  const Vec2 O = preset.O;
  ReconstructionSpec spec;
  spec.A_fn = [arc, O, s0, L, closed = preset.closed](double tau) {
    double s = closed ? std::fmod(s0 + tau, L) : std::min(s0 + tau, L);
    if (s < 0) s += L;
    return areal_density(arc, O, s);
  };
  const Vec2 g0 = arc.eval(s0), d0 = arc.deriv1(s0);
  const Vec2 rv = g0 - O;
  spec.start.r = std::hypot(rv.x, rv.y);
  spec.start.phi = std::atan2(rv.y, rv.x);
  spec.start.branch = (rv.x * d0.x + rv.y * d0.y) >= 0 ? +1 : -1;
  spec.span = span;
  spec.step = step;
  spec.switch_tol = switch_tol;
  return spec;
}

// ---------------------------------------------------------------------------
// subcommand bodies

void run_cf_eval(const CliConfig& cfg, const std::string& seq_text) {
  if (use_exact(cfg, {seq_text})) {
    const ProjectiveRatio pr = eval_cf(parse_rat_sequence(seq_text));
    emit(cfg, to_json(pr), pr.str() + "\n");
  } else {
    const auto [p, q] = eval_cf_approx(parse_double_sequence(seq_text));
    const double v = p / q;
    emit(cfg, Json{{"p", p}, {"q", q}, {"value", v}}, format_scalar(v) + "\n");
  }
}

void run_cf_expand(const CliConfig& cfg, const std::string& value,
                   const std::string& parity_str, int max_terms, double tol) {
  std::vector<Int> terms;
  if (use_exact(cfg, {value})) {
    const Parity parity = parity_str == "even" ? Parity::even : Parity::odd;
    terms = expand_rational(parse_rational(value), parity);
  } else {
    terms = expand_real(parse_double_token(value), max_terms, tol);
  }
  std::string line;
  Json arr = Json::array();
  for (size_t i = 0; i < terms.size(); ++i) {
    if (i) line += ",";
    line += terms[i].str();
    arr.push_back(terms[i].str());
  }
  emit(cfg, arr, line + "\n");
}

void run_cf_continuants(const CliConfig& cfg, const std::string& seq_text) {
  std::ostringstream csv;
  csv << "p,q\n";
  if (use_exact(cfg, {seq_text})) {
    const auto pairs = continuants(parse_rat_sequence(seq_text));
    for (const auto& pq : pairs)
      csv << format_scalar(pq.p) << ',' << format_scalar(pq.q) << '\n';
    emit(cfg, to_json(pairs), csv.str());
  } else {
    const auto pairs = continuants(parse_double_sequence(seq_text));
    Json arr = Json::array();
    for (const auto& pq : pairs) {
      csv << format_scalar(pq.p) << ',' << format_scalar(pq.q) << '\n';
      arr.push_back(Json{{"p", pq.p}, {"q", pq.q}});
    }
    emit(cfg, arr, csv.str());
  }
}

void run_sail(const CliConfig& cfg, const std::string& alpha_text, bool lls_only) {
  if (any_decimal({alpha_text}) || cfg.mode == "float")
    throw std::domain_error("sail requires an exact rational slope");
  const SailResult s = sail(ConeSpec{parse_rational(alpha_text)});
  if (lls_only) {
    emit(cfg, to_json(s.lls), join_scalars(s.lls) + "\n");
    return;
  }
  std::ostringstream csv;
  write_csv(csv, s);
  emit(cfg, to_json(s), csv.str());
}

template <Scalar S>
void polyline_build_print(const CliConfig& cfg, const std::string& seq_text,
                          const std::string& frame_text) {
  CFSequence<S> lls;
  if constexpr (is_exact_v<S>)
    lls = parse_rat_sequence(seq_text);
  else
    lls = parse_double_sequence(seq_text);
  const Polyline<S> poly = build(parse_frame<S>(frame_text), lls, cfg.ptol);
  std::ostringstream csv;
  write_csv(csv, poly);
  emit(cfg, to_json(poly), csv.str());
}

void run_polyline_lls(const CliConfig& cfg, const std::string& points_text,
                      const std::string& file, const std::string& origin_text) {
  std::vector<std::pair<std::string, std::string>> cells;
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw std::domain_error("cannot open points file: " + file);
    cells = read_xy_csv(in);
  } else {
    for (const std::string& part : split_list(points_text, ';')) {
      const std::vector<std::string> xy = split_list(part);
      if (xy.size() != 2) throw std::domain_error("expected 'x,y': " + part);
      cells.emplace_back(xy[0], xy[1]);
    }
  }
  if (cells.size() < 2) throw std::domain_error("need at least two vertices");
  std::vector<std::string> flat{origin_text};
  for (const auto& [x, y] : cells) {
    flat.push_back(x);
    flat.push_back(y);
  }
  if (use_exact(cfg, flat)) {
    Polyline<Rat> poly;
    poly.O = parse_point<Rat>(origin_text);
    for (const auto& [x, y] : cells)
      poly.vertices.push_back({parse_rational(x), parse_rational(y)});
    const CFSequence<Rat> lls = lls_of(poly, cfg.ptol);
    emit(cfg, to_json(lls), join_scalars(lls) + "\n");
  } else {
    Polyline<double> poly;
    poly.O = parse_point<double>(origin_text);
    for (const auto& [x, y] : cells)
      poly.vertices.push_back({parse_double_token(x), parse_double_token(y)});
    const CFSequence<double> lls = lls_of(poly, cfg.ptol);
    emit(cfg, to_json(lls), join_scalars(lls) + "\n");
  }
}

void run_polyline_closed(const CliConfig& cfg, const std::string& seq_text) {
  bool closed = false;
  if (use_exact(cfg, {seq_text}))
    closed = is_closed(parse_rat_sequence(seq_text), cfg.ptol);
  else
    closed = is_closed(parse_double_sequence(seq_text), cfg.ptol);
  emit(cfg, Json{{"closed", closed}}, std::string(closed ? "true" : "false") + "\n");
}

template <Scalar S>
void polyline_transform_print(const CliConfig& cfg, const std::string& seq_text,
                              const std::string& matrix_text,
                              const std::string& frame_text, bool show_lls) {
  const std::vector<std::string> cells = split_list(matrix_text);
  if (cells.size() != 4) throw std::domain_error("matrix must be 'a,b,c,d'");
  Mat2<S> m;
  CFSequence<S> lls;
  if constexpr (is_exact_v<S>) {
    m = {parse_rational(cells[0]), parse_rational(cells[1]), parse_rational(cells[2]),
         parse_rational(cells[3])};
    lls = parse_rat_sequence(seq_text);
  } else {
    m = {parse_double_token(cells[0]), parse_double_token(cells[1]),
         parse_double_token(cells[2]), parse_double_token(cells[3])};
    lls = parse_double_sequence(seq_text);
  }
  const Polyline<S> image =
      transform(build(parse_frame<S>(frame_text), lls, cfg.ptol), m, cfg.ptol);
  if (show_lls) {
    const CFSequence<S> out = lls_of(image, cfg.ptol);
    emit(cfg, to_json(out), join_scalars(out) + "\n");
    return;
  }
  std::ostringstream csv;
  write_csv(csv, image);
  emit(cfg, to_json(image), csv.str());
}

void run_polyline_endpoint(const CliConfig& cfg, const std::string& seq_text) {
  if (any_decimal({seq_text}) || cfg.mode == "float")
    throw std::domain_error("endpoint requires an exact sequence");
  const CFSequence<Rat> lls = parse_rat_sequence(seq_text);
  validate_lls(lls);
  // The broken line from the normalized frame ends at (Q, P), the raw
  // continuant pair with coordinates swapped.
  const auto [p, q] = final_continuant(lls);
  const ProjectiveRatio canonical = endpoint_pair(lls);
  emit(cfg,
       Json{{"x", format_scalar(q)}, {"y", format_scalar(p)},
            {"canonical", canonical.str()}},
       "x,y\n" + format_scalar(q) + "," + format_scalar(p) + "\n");
}

void run_density_sample(const CliConfig& cfg, const PresetArgs& pa, int n,
                        const std::string& method_str, bool arclength) {
  if (n < 1) throw std::domain_error("need n >= 1 samples");
  const Preset preset = make_preset(pa.name, pa.a, pa.b, pa.spiral_b);
  const ParamCurve curve = arclength ? by_arclength(preset.curve) : preset.curve;
  const AngularMethod method = method_str == "finite_difference"
                                   ? AngularMethod::finite_difference
                                   : AngularMethod::curvature;
  std::vector<DensityRow> rows;
  rows.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = curve.t_lo + (curve.t_hi - curve.t_lo) * i / n;
    const Vec2 g = curve.eval(t);
    rows.push_back({t, g.x, g.y, areal_density(curve, preset.O, t),
                    angular_density(curve, preset.O, t, method),
                    curvature(curve, t)});
  }
  std::ostringstream csv;
  write_csv(csv, rows);
  emit(cfg, to_json(rows), csv.str());
}

void run_density_discretize(const CliConfig& cfg, const PresetArgs& pa, int n) {
  const Preset preset = make_preset(pa.name, pa.a, pa.b, pa.spiral_b);
  const ParamCurve arc = by_arclength(preset.curve);
  const DiscretizedDensities dd = discretize(arc, preset.O, n);
  std::ostringstream csv;
  csv << "k,A,B\n";
  for (int k = 0; k < n; ++k) {
    csv << k << ',' << format_scalar(dd.A.values[k]) << ',';
    if (k < n - 1) csv << format_scalar(dd.B.values[k]);
    csv << '\n';
  }
  emit(cfg,
       Json{{"n", n}, {"T", dd.A.T}, {"A", dd.A.values}, {"B", dd.B.values}},
       csv.str());
}

void run_density_sector(const CliConfig& cfg, const PresetArgs& pa,
                        std::optional<double> t0, std::optional<double> t1) {
  const Preset preset = make_preset(pa.name, pa.a, pa.b, pa.spiral_b);
  const double lo = t0.value_or(preset.curve.t_lo);
  const double hi = t1.value_or(preset.curve.t_hi);
  const double area = sector_area(preset.curve, preset.O, lo, hi);
  emit(cfg, Json{{"area", area}}, format_scalar(area) + "\n");
}

void run_density_kepler_lambda(const CliConfig& cfg, double a, double b,
                               double ref_a, double ref_period) {
  const KeplerLambdaResult r = kepler_lambda(a, b, ref_a, ref_period);
  std::ostringstream csv;
  csv << "lambda,length,time_integral,period\n"
      << format_scalar(r.lambda) << ',' << format_scalar(r.length) << ','
      << format_scalar(r.time_integral) << ',' << format_scalar(r.period) << '\n';
  emit(cfg,
       Json{{"lambda", r.lambda},
            {"length", r.length},
            {"time_integral", r.time_integral},
            {"period", r.period}},
       csv.str());
}

void run_reconstruct_run(const CliConfig& cfg, const PresetArgs& pa,
                         const std::string& table_file, double s0, double span,
                         double step, double r0, double phi0, int branch,
                         double switch_tol) {
  ReconstructionSpec spec;
  if (!table_file.empty()) {
    std::ifstream in(table_file);
    if (!in) throw std::domain_error("cannot open table file: " + table_file);
    const LinearTable tab = LinearTable::from_rows(read_xy_csv(in));
    if (!(r0 > 0)) throw std::domain_error("table input needs --r0 > 0");
    if (span <= 0) span = tab.t.back() - tab.t.front();
    // The table abscissa is shifted so the history starts at 0.
    const double t0 = tab.t.front();
    spec.A_fn = [tab, t0](double t) { return tab(t0 + t); };
    spec.start = {r0, phi0, branch >= 0 ? +1 : -1};
    spec.span = span;
    spec.step = step;
    spec.switch_tol = switch_tol;
  } else {
    if (pa.name.empty())
      throw std::domain_error("reconstruct run needs --preset or --table");
    spec = preset_spec(make_preset(pa.name, pa.a, pa.b, pa.spiral_b), s0, span,
                       step, switch_tol);
  }
  const std::vector<ReconSample> samples = reconstruct(spec);
  std::ostringstream csv;
  write_csv(csv, samples);
  emit(cfg, to_json(samples), csv.str());
}

void run_reconstruct_roundtrip(const CliConfig& cfg, const PresetArgs& pa,
                               double s0, double span, double step,
                               double switch_tol) {
  const Preset preset = make_preset(pa.name, pa.a, pa.b, pa.spiral_b);
  const RoundtripReport rep = roundtrip_error(preset, s0, span, step, switch_tol);
  std::ostringstream csv;
  csv << "max_distance,steps,branch_flips,span,step\n"
      << format_scalar(rep.max_distance) << ',' << rep.steps << ','
      << rep.branch_flips << ',' << format_scalar(rep.span) << ','
      << format_scalar(rep.step) << '\n';
  emit(cfg,
       Json{{"max_distance", rep.max_distance},
            {"steps", rep.steps},
            {"branch_flips", rep.branch_flips},
            {"span", rep.span},
            {"step", rep.step}},
       csv.str());
}

// ---------------------------------------------------------------------------
// paper repro: the worked examples, each checked and reported on one line

int run_repro() {
  int failures = 0;
  const auto check = [&failures](const std::string& label, bool ok,
                                 const std::string& detail = "") {
    if (ok) {
      std::cout << "PASS " << label << "\n";
    } else {
      ++failures;
      std::cout << "FAIL " << label << (detail.empty() ? "" : " (" + detail + ")")
                << "\n";
    }
  };

  {
    const ProjectiveRatio v1 = eval_cf(parse_rat_sequence("2,-1,3,-2,1"));
    check("cf eval [2,-1,3,-2,1] = 0/1", v1 == ProjectiveRatio(Int(0), Int(1)),
          "got " + v1.str());
    const ProjectiveRatio v2 = eval_cf(parse_rat_sequence("1,-2,2,-1/2,-4"));
    check("cf eval [1,-2,2,-1/2,-4] = -1", v2 == ProjectiveRatio(Int(-1), Int(1)),
          "got " + v2.str());
  }

  {
    const CFSequence<Rat> lls = parse_rat_sequence("2,-1,3,-2,1");
    const Polyline<Rat> poly = build(normalized_frame<Rat>(), lls);
    const bool at_start =
        poly.vertices.size() == 4 && poly.vertices[3] == Point2<Rat>{Rat(1), Rat(0)};
    check("closed broken line returns to (1,0)", at_start);
    check("closure predicate agrees", is_closed(lls));
    const auto [p, q] = final_continuant(lls);
    check("continuant identity P = 0", p == 0, "got " + format_scalar(p));
    check("continuant identity Q = 1", q == 1, "got " + format_scalar(q));
  }

  {
    const SailResult s = sail(ConeSpec{Rat(7, 5)});
    const bool verts = s.vertices.size() == 3 && s.vertices[0].x == 1 &&
                       s.vertices[0].y == 0 && s.vertices[1].x == 1 &&
                       s.vertices[1].y == 1 && s.vertices[2].x == 5 &&
                       s.vertices[2].y == 7;
    check("sail(7/5) vertices (1,0),(1,1),(5,7)", verts);
    check("sail(7/5) LLS = 1,2,2",
          s.lls == CFSequence<Rat>{Rat(1), Rat(2), Rat(2)});
    check("sail LLS evaluates back to 7/5",
          eval_cf(s.lls) == ProjectiveRatio(Int(7), Int(5)));
  }

  {
    const Preset line = preset_line(3.0);
    const double A = areal_density(line.curve, line.O, 0.7);
    const double B = angular_density(line.curve, line.O, 0.7);
    check("line x=3: A = 3", std::fabs(A - 3.0) <= 1e-12, format_scalar(A));
    check("line x=3: B = 0", std::fabs(B) <= 1e-12, format_scalar(B));
  }

  {
    const Preset e = preset_ellipse_center(2.0, 1.0);
    const double A0 = areal_density(e.curve, e.O, 0.0);
    check("ellipse(2,1) center: A(0) = 2", std::fabs(A0 - 2.0) <= 1e-10,
          format_scalar(A0));
    bool ratio_ok = true;
    for (double t : {0.3, 1.1, 2.9, 4.2}) {
      const double A = areal_density(e.curve, e.O, t);
      const double B = angular_density(e.curve, e.O, t);
      if (std::fabs(A / B - 4.0) > 1e-9) ratio_ok = false;
    }
    check("ellipse(2,1) center: A/B = a^2 b^2 = 4", ratio_ok);
  }

  {
    const Preset e = preset_ellipse_focus(2.0, 1.0);
    const double A0 = areal_density(e.curve, e.O, 0.0);
    const double want = 2.0 + std::sqrt(3.0);
    check("ellipse(2,1) focus: A(0) = 2 + sqrt(3)",
          std::fabs(A0 - want) <= 1e-10, format_scalar(A0));
  }

  {
    const Preset sp = preset_log_spiral(1.0, 0.1);
    bool ok = true;
    for (double t : {0.0, 0.35, 1.7, 5.0}) {
      const double A = areal_density(sp.curve, sp.O, t);
      const double B = angular_density(sp.curve, sp.O, t);
      if (std::fabs(A * A * A * B - 1.0 / 1.01) > 1e-10) ok = false;
    }
    check("log spiral(1, 0.1): A^3 B = 1/(b^2+1)", ok);
    const Preset circle = preset_log_spiral(1.0, 0.0);
    const double Ac = areal_density(circle.curve, circle.O, 0.9);
    const double Bc = angular_density(circle.curve, circle.O, 0.9);
    check("unit circle: A = B = 1",
          std::fabs(Ac - 1.0) <= 1e-12 && std::fabs(Bc - 1.0) <= 1e-9);
  }

  {
    const double pi = std::acos(-1.0);
    const KeplerLambdaResult r = kepler_lambda(1.0, 1.0, 1.0, 2.0 * pi);
    check("unit circular orbit: period = reference period",
          std::fabs(r.period - 2.0 * pi) <= 1e-8 * 2.0 * pi,
          format_scalar(r.period));
  }

  std::cout << (failures == 0 ? "repro OK\n" : "repro FAILED\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geometry of continued fractions with arbitrary elements"};
  app.require_subcommand(1);
  app.fallthrough();

  CliConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--mode", cfg.mode, "force exact or float arithmetic")
      ->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--output", cfg.output, "csv (default) or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", cfg.seed, "seed for randomized demos");

  // cf --------------------------------------------------------------------
  auto* cf = app.add_subcommand("cf", "continued fractions and continuants");
  cf->require_subcommand(1);
  std::string cf_seq, cf_value, cf_parity = "odd";
  int cf_max_terms = 48;
  double cf_tol = 1e-12;
  auto* cf_eval = cf->add_subcommand("eval", "evaluate a continued fraction");
  cf_eval->add_option("--seq", cf_seq, "comma separated elements")->required();
  cf_eval->callback([&] { run_cf_eval(cfg, cf_seq); });
  auto* cf_expand = cf->add_subcommand("expand", "expand a value into a continued fraction");
  cf_expand->add_option("--value", cf_value)->required();
  cf_expand->add_option("--parity", cf_parity, "odd or even length (exact values)")
      ->check(CLI::IsMember({"odd", "even"}));
  cf_expand->add_option("--max-terms", cf_max_terms, "term cap for decimal input");
  cf_expand->add_option("--tol", cf_tol, "remainder cutoff for decimal input");
  cf_expand->callback([&] { run_cf_expand(cfg, cf_value, cf_parity, cf_max_terms, cf_tol); });
  auto* cf_cont = cf->add_subcommand("continuants", "list the continuant pairs");
  cf_cont->add_option("--seq", cf_seq)->required();
  cf_cont->callback([&] { run_cf_continuants(cfg, cf_seq); });

  // sail ------------------------------------------------------------------
  auto* sailc = app.add_subcommand("sail", "lattice sails of planar cones");
  sailc->require_subcommand(1);
  std::string sail_alpha;
  bool sail_lls_only = false;
  auto* sail_compute = sailc->add_subcommand("compute", "sail vertices and LLS sequence");
  sail_compute->add_option("--alpha", sail_alpha, "cone slope, rational p/q >= 1")->required();
  sail_compute->add_flag("--lls-only", sail_lls_only, "print only the LLS sequence");
  sail_compute->callback([&] { run_sail(cfg, sail_alpha, sail_lls_only); });

  // polyline ----------------------------------------------------------------
  auto* poly = app.add_subcommand("polyline", "broken lines and LLS sequences");
  poly->require_subcommand(1);
  std::string pl_seq, pl_frame, pl_points, pl_file, pl_origin = "0,0", pl_matrix;
  bool pl_show_lls = false;
  auto* pl_build = poly->add_subcommand("build", "broken line from an LLS sequence");
  pl_build->add_option("--seq", pl_seq)->required();
  pl_build->add_option("--frame", pl_frame, "Ox,Oy;A0x,A0y;vx,vy (default normalized)");
  pl_build->callback([&] {
    if (use_exact(cfg, {pl_seq, pl_frame}))
      polyline_build_print<Rat>(cfg, pl_seq, pl_frame);
    else
      polyline_build_print<double>(cfg, pl_seq, pl_frame);
  });
  auto* pl_lls = poly->add_subcommand("lls", "LLS sequence of a broken line");
  pl_lls->add_option("--points", pl_points, "x,y;x,y;... vertices");
  pl_lls->add_option("--file", pl_file, "CSV file with x,y rows");
  pl_lls->add_option("--O", pl_origin, "observation point (default 0,0)");
  pl_lls->callback([&] { run_polyline_lls(cfg, pl_points, pl_file, pl_origin); });
  auto* pl_closed = poly->add_subcommand("closed", "closure test for an LLS sequence");
  pl_closed->add_option("--seq", pl_seq)->required();
  pl_closed->callback([&] { run_polyline_closed(cfg, pl_seq); });
  auto* pl_tf = poly->add_subcommand("transform", "apply a 2x2 map to a broken line");
  pl_tf->add_option("--seq", pl_seq)->required();
  pl_tf->add_option("--matrix", pl_matrix, "a,b,c,d row major")->required();
  pl_tf->add_option("--frame", pl_frame);
  pl_tf->add_flag("--show-lls", pl_show_lls, "print the LLS sequence of the image");
  pl_tf->callback([&] {
    if (use_exact(cfg, {pl_seq, pl_matrix, pl_frame}))
      polyline_transform_print<Rat>(cfg, pl_seq, pl_matrix, pl_frame, pl_show_lls);
    else
      polyline_transform_print<double>(cfg, pl_seq, pl_matrix, pl_frame, pl_show_lls);
  });
  auto* pl_end = poly->add_subcommand("endpoint", "endpoint of the normalized broken line");
  pl_end->add_option("--seq", pl_seq)->required();
  pl_end->callback([&] { run_polyline_endpoint(cfg, pl_seq); });

  // density -----------------------------------------------------------------
  auto* dens = app.add_subcommand("density", "areal and angular densities of curves");
  dens->require_subcommand(1);
  PresetArgs ds_pa, dd_pa, sc_pa;
  int ds_n = 100, dd_n = 64;
  std::string ds_method = "curvature";
  bool ds_arclength = false;
  std::optional<double> sc_t0, sc_t1;
  double kl_a = 2.0, kl_b = 1.0, kl_ref_a = 1.0, kl_ref_period = 1.0;
  auto* d_sample = dens->add_subcommand("sample", "tabulate A, B and curvature");
  add_preset_options(d_sample, ds_pa);
  d_sample->add_option("--n", ds_n, "number of cells (n+1 rows)");
  d_sample->add_option("--method", ds_method)
      ->check(CLI::IsMember({"curvature", "finite_difference"}));
  d_sample->add_flag("--arclength", ds_arclength, "sample by arclength instead of native parameter");
  d_sample->callback([&] { run_density_sample(cfg, ds_pa, ds_n, ds_method, ds_arclength); });
  auto* d_disc = dens->add_subcommand("discretize", "inscribed polygon density estimates");
  add_preset_options(d_disc, dd_pa);
  d_disc->add_option("--n", dd_n, "polygon cells")->required();
  d_disc->callback([&] { run_density_discretize(cfg, dd_pa, dd_n); });
  auto* d_sector = dens->add_subcommand("sector", "swept sector area");
  add_preset_options(d_sector, sc_pa);
  double sc_t0_v = 0.0, sc_t1_v = 0.0;
  d_sector->add_option("--t0", sc_t0_v, "lower parameter (default: curve start)");
  d_sector->add_option("--t1", sc_t1_v, "upper parameter (default: curve end)");
  d_sector->callback([&] {
    if (d_sector->count("--t0")) sc_t0 = sc_t0_v;
    if (d_sector->count("--t1")) sc_t1 = sc_t1_v;
    run_density_sector(cfg, sc_pa, sc_t0, sc_t1);
  });
  auto* d_kl = dens->add_subcommand("kepler-lambda", "period scaling for focal ellipses");
  d_kl->add_option("--a", kl_a, "semi-major axis")->required();
  d_kl->add_option("--b", kl_b, "semi-minor axis")->required();
  d_kl->add_option("--ref-a", kl_ref_a, "reference semi-major axis")->required();
  d_kl->add_option("--ref-period", kl_ref_period, "reference period")->required();
  d_kl->callback([&] { run_density_kepler_lambda(cfg, kl_a, kl_b, kl_ref_a, kl_ref_period); });

  // reconstruct ---------------------------------------------------------------
  auto* rec = app.add_subcommand("reconstruct", "curve recovery from density histories");
  rec->require_subcommand(1);
  PresetArgs rr_pa, rt_pa;
  rr_pa.name.clear();
  std::string rr_table;
  double rr_s0 = 0.0, rr_span = 0.0, rr_step = 1e-3;
  double rr_r0 = 0.0, rr_phi0 = 0.0;
  int rr_branch = +1;
  double rt_s0 = 0.0, rt_span = 0.0, rt_step = 1e-3;
  auto* r_run = rec->add_subcommand("run", "integrate a density history");
  r_run->add_option("--preset", rr_pa.name, "preset curve supplying the history");
  r_run->add_option("--a", rr_pa.a);
  r_run->add_option("--b", rr_pa.b);
  r_run->add_option("--spiral-b", rr_pa.spiral_b);
  r_run->add_option("--table", rr_table, "CSV file of t,A rows (piecewise linear)");
  r_run->add_option("--s0", rr_s0, "starting arclength on the preset");
  r_run->add_option("--span", rr_span, "history length (defaults to the table range)");
  r_run->add_option("--step", rr_step, "integration step")->required();
  r_run->add_option("--r0", rr_r0, "starting radius (table input)");
  r_run->add_option("--phi0", rr_phi0, "starting angle (table input)");
  r_run->add_option("--branch", rr_branch, "+1 outward or -1 inward (table input)");
  r_run->add_option("--switch-tol", cfg.switch_tol);
  r_run->callback([&] {
    run_reconstruct_run(cfg, rr_pa, rr_table, rr_s0, rr_span, rr_step, rr_r0,
                        rr_phi0, rr_branch, cfg.switch_tol);
  });
  auto* r_rt = rec->add_subcommand("roundtrip", "reconstruct a preset from its own history");
  add_preset_options(r_rt, rt_pa);
  r_rt->add_option("--s0", rt_s0, "starting arclength");
  r_rt->add_option("--span", rt_span, "history length")->required();
  r_rt->add_option("--step", rt_step, "integration step")->required();
  r_rt->add_option("--switch-tol", cfg.switch_tol);
  r_rt->callback([&] {
    run_reconstruct_roundtrip(cfg, rt_pa, rt_s0, rt_span, rt_step, cfg.switch_tol);
  });

  // paper ---------------------------------------------------------------------
  auto* paper = app.add_subcommand("paper", "worked examples");
  paper->require_subcommand(1);
  int repro_rc = 0;
  auto* repro = paper->add_subcommand("repro", "run the worked examples and report PASS/FAIL");
  repro->callback([&] { repro_rc = run_repro(); });

  try {
    // Config file first (if any), so command line flags win.
    const char* env = std::getenv("CFGEOM_CONFIG");
    for (int i = 1; i < argc; ++i) {
      const std::string arg = argv[i];
      if (arg == "--config" && i + 1 < argc)
        config_path = argv[i + 1];
      else if (arg.rfind("--config=", 0) == 0)
        config_path = arg.substr(9);
    }
    if (config_path.empty() && env && *env) config_path = env;
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return repro_rc;
}
