#pragma once

/// @file kepler_reconstruct.hpp
/// Recovering a unit-speed curve from its areal density history A(t) and an
/// initial polar state relative to the observer. In polar coordinates around
/// the observer the unit-speed condition splits as
///
///   dphi/dt = A(t) / r^2,   dr/dt = branch * sqrt(1 - A(t)^2 / r^2),
///
/// with branch in {+1, -1}. The radicand vanishing marks a turning point of
/// r: integration there must switch branch, and detecting those points
/// robustly is the main job of this module. Three event regimes occur:
///
///   * band break: the radicand at the accepted step endpoint is negative
///     beyond switch_tol. The radicand of an exact history is (dr/dt)^2,
///     which touches zero but never crosses it, so a negative value is a
///     drift-shifted tangency, and bisecting its zero would misplace the
///     event by O(sqrt(drift)). Instead the event is re-localized onto the
///     nearest extremum of A^2 of the right kind (valley when moving inward,
///     peak when moving outward): every tangency satisfies (A^2)' = 0, so
///     the density history pins the turning time independently of drift.
///   * tangency dip: the radicand touches zero without crossing (|A| falls
///     away again after the turning point). At step resolution this shows
///     as a local minimum of the radicand among consecutive nodes; any dip
///     below a guard threshold is refined by ternary search and treated as
///     an event only if the refined minimum reaches the radicand resolution
///     the integrator can deliver.
///   * locus glide: an event proposes flipping inward while the turning
///     locus r = |A| is still rising. Neither branch solves the dynamics
///     there (from a standing start dr/dt = 0 cannot outrun d|A|/dt), so the
///     trajectory hugs the locus, r = |A| and dphi/dt = 1/A, until the locus
///     peaks, and the flip is committed at the peak. Drift-advanced
///     tangencies and grazing contacts both land in this regime.
///
/// At every event the radius is projected onto the constraint r = |A|, and
/// two committed flips closer than one nominal step are reported as an error
/// rather than resolved silently.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "curve_density.hpp"
#include "errors.hpp"

namespace cfgeom {

enum class Feasibility {
  no_curve,      ///< |A| > r: no unit-speed curve matches
  unique_local,  ///< 0 < |A| < r: locally unique curve per branch
  degenerate     ///< |A| = r (circular glide) or A = 0 (radial ray)
};

/// Classifies an initial pair (A0, r0). Comparisons use tol as an absolute
/// band around the degenerate loci.
inline Feasibility feasible(double A0, double r0, double tol = 1e-9) {
  if (!(r0 > 0)) throw std::domain_error("feasible: r0 must be positive");
  if (!(tol >= 0)) throw std::domain_error("feasible: tol must be non-negative");
  const double a = std::fabs(A0);
  if (a <= tol || std::fabs(a - r0) <= tol) return Feasibility::degenerate;
  return a > r0 ? Feasibility::no_curve : Feasibility::unique_local;
}

struct PolarState {
  double r = 0.0;
  double phi = 0.0;
  int branch = +1;  ///< sign of dr/dt, +1 outward, -1 inward
};

struct ReconstructionSpec {
  std::function<double(double)> A_fn;  ///< areal density history, t in [0, span]
  PolarState start;
  double span = 0.0;
  double step = 0.0;
  double switch_tol = 1e-9;  ///< radicand band treated as "at a turning point"
};

struct ReconSample {
  double t = 0.0;
  double x = 0.0;  ///< observer-centered Cartesian position
  double y = 0.0;
  double r = 0.0;
  double phi = 0.0;
  int branch = +1;  ///< branch in effect leaving this node; 0 while gliding
                    ///< along the turning locus
};

namespace detail {

struct ReconState {
  double r, phi;
};

inline double radicand(const std::function<double(double)>& A, double t, double r) {
  const double q = A(t) / r;
  return 1.0 - q * q;
}

/// One classical 4th-order step of size h with the branch held fixed; the
/// radicand is clamped at zero so stages straddling a turning point stay
/// real.
inline ReconState rk4_step(const std::function<double(double)>& A, double t,
                           ReconState s, double h, int branch) {
  const auto rhs = [&](double tt, const ReconState& st) {
    if (!(st.r > 0)) throw NumericalError("reconstruct: radius collapsed");
    const double a = A(tt);
    const double f = 1.0 - (a / st.r) * (a / st.r);
    const double dr = branch * std::sqrt(f > 0 ? f : 0.0);
    return ReconState{dr, a / (st.r * st.r)};
  };
  const ReconState k1 = rhs(t, s);
  const ReconState k2 = rhs(t + 0.5 * h, {s.r + 0.5 * h * k1.r, s.phi + 0.5 * h * k1.phi});
  const ReconState k3 = rhs(t + 0.5 * h, {s.r + 0.5 * h * k2.r, s.phi + 0.5 * h * k2.phi});
  const ReconState k4 = rhs(t + h, {s.r + h * k3.r, s.phi + h * k3.phi});
  return {s.r + h / 6.0 * (k1.r + 2 * k2.r + 2 * k3.r + k4.r),
          s.phi + h / 6.0 * (k1.phi + 2 * k2.phi + 2 * k3.phi + k4.phi)};
}

/// Integrates from (t0, s0) to t0 + u in a few substeps of comparable size
/// to the nominal grid; used by event refinement.
inline ReconState advance(const std::function<double(double)>& A, double t0,
                          ReconState s0, double u, int branch, double h_nom) {
  if (u <= 0) return s0;
  int parts = static_cast<int>(std::ceil(u / h_nom));
  if (parts < 1) parts = 1;
  if (parts > 8) parts = 8;
  const double h = u / parts;
  ReconState s = s0;
  for (int i = 0; i < parts; ++i) s = rk4_step(A, t0 + i * h, s, h, branch);
  return s;
}

}  // namespace detail

/// Integrates the reconstruction dynamics over [0, span] with fixed step,
/// branch-switching at turning points as described in the file header.
/// Samples are emitted at every accepted node, event nodes included.
///
/// A start with |A(0)| = r0 (within switch_tol) enters glide mode: r is held
/// constant and only phi advances; the radicand must then stay inside the
/// switch_tol band over the whole span or a NumericalError is raised. A
/// start with A(0) = 0 is rejected: the density history carries no
/// curvature information for a radial ray.
inline std::vector<ReconSample> reconstruct(const ReconstructionSpec& spec) {
  if (!spec.A_fn) throw std::domain_error("reconstruct: missing density history");
  if (!(spec.span > 0)) throw std::domain_error("reconstruct: span must be positive");
  if (!(spec.step > 0) || spec.step > spec.span / 10.0)
    throw std::domain_error("reconstruct: need 0 < step <= span / 10");
  if (!(spec.switch_tol > 0))
    throw std::domain_error("reconstruct: switch_tol must be positive");
  if (!(spec.start.r > 0)) throw std::domain_error("reconstruct: r must be positive");
  if (spec.start.branch != 1 && spec.start.branch != -1)
    throw std::domain_error("reconstruct: branch must be +1 or -1");

  const auto& A = spec.A_fn;
  const double tol = spec.switch_tol;
  const double A0 = A(0.0);
  if (std::fabs(A0) <= tol)
    throw std::domain_error(
        "reconstruct: A = 0 at start, radial ray carries no curvature data");
  const double f0 = detail::radicand(A, 0.0, spec.start.r);
  if (f0 < -tol)
    throw std::domain_error("reconstruct: |A| exceeds r at start, no curve exists");

  std::vector<ReconSample> out;
  out.reserve(static_cast<size_t>(spec.span / spec.step) + 16);
  const auto push = [&](double t, const detail::ReconState& s, int branch) {
    out.push_back({t, s.r * std::cos(s.phi), s.r * std::sin(s.phi), s.r, s.phi, branch});
  };

  detail::ReconState state{spec.start.r, spec.start.phi};

  if (f0 <= tol) {
    // Glide mode: the start sits on the turning locus.
    push(0.0, state, 0);
    double t = 0.0;
    while (t < spec.span - 1e-15 * spec.span) {
      const double h = std::min(spec.step, spec.span - t);
      // r frozen; phi by Simpson on A / r^2 across the step.
      const double r2 = state.r * state.r;
      state.phi += h / 6.0 * (A(t) + 4.0 * A(t + 0.5 * h) + A(t + h)) / r2;
      t += h;
      const double f = detail::radicand(A, t, state.r);
      if (std::fabs(f) > tol)
        throw NumericalError(
            "reconstruct: glide start but radicand left the switch_tol band");
      push(t, state, 0);
    }
    return out;
  }

  // Transversal mode with event detection. Right after a flip the radicand
  // sits at integration-noise level above zero, so event triggers stay
  // disarmed until it has climbed past dip_guard; while disarmed, noise-level
  // negative radicands are absorbed by projecting r back onto |A| (constraint
  // hugging) instead of flipping again. Locus probes sample A_fn up to the
  // finite-difference width dfd outside [0, span].
  int branch = spec.start.branch;
  int flips = 0;
  double last_flip_t = -spec.span;
  bool armed = true;
  const double dip_guard = std::max(1e-4, 1e3 * tol);
  const double hug_band = 1e3 * tol;
  const double dfd = 10.0 * spec.step;

  struct Node {
    double t;
    detail::ReconState s;
    double f;
  };
  std::vector<Node> recent;  // last three accepted nodes, for dip detection
  double t = 0.0;

  const auto record = [&](double t_at, const detail::ReconState& s, double f) {
    recent.push_back({t_at, s, f});
    if (recent.size() > 3) recent.erase(recent.begin());
    push(t_at, s, branch);
  };

  const auto A2 = [&](double u) {
    const double a = A(u);
    return a * a;
  };
  // Central difference of A^2 over dfd: tells which way the turning locus
  // r = |A| is moving.
  const auto locus_slope = [&](double u) {
    return (A2(u + dfd) - A2(u - dfd)) / (2.0 * dfd);
  };

  const auto commit_flip = [&](double t_event, const detail::ReconState& s_event) {
#ifdef CFGEOM_TRACE_EVENTS
    std::fprintf(stderr, "[flip] t=%.12g r=%.12g branch %d -> %d\n", t_event,
                 s_event.r, branch, -branch);
#endif
    if (t_event - last_flip_t <= spec.step && flips > 0)
      throw NumericalError("reconstruct: two branch switches within one step");
    branch = -branch;
    ++flips;
    last_flip_t = t_event;
    armed = false;
    recent.clear();
    record(t_event, s_event, detail::radicand(A, t_event, s_event.r));
  };

  // After a flip at a tangency the turning locus r = |A| moves with the
  // trajectory: both leave the event quadratically, the clamped radicand
  // vanishes to second order, and the integrator would stay glued to the
  // locus (every stage sees dr/dt = sqrt(0)). When the locus does not fall
  // away on its own, escape on the local model w = r^2 - A^2 = c^2 (t-t_ev)^2.
  // Matching d(r^2)/dt = 2 b sqrt(w) gives 2c^2 = 2bc - (A^2)'', whose
  // positive root is the escaping solution. The model runs only a few steps,
  // past the square-root kink, then hands back to the integrator.
  const auto escape_after_flip = [&](double t_ev) {
    const double g0 = locus_slope(t_ev);
    const double G = (A2(t_ev + dfd) - 2.0 * A2(t_ev) + A2(t_ev - dfd)) / (dfd * dfd);
    const double h = spec.step;
    if (g0 * h + 0.5 * G * h * h <= 0.0) return;  // locus falls away; RK4 grips
    const double disc = 1.0 - 2.0 * G;
    const double c = disc >= 0.0 ? 0.5 * (branch + std::sqrt(disc)) : -1.0;
    if (!(c > 0.0))
      throw NumericalError(
          "reconstruct: no escaping branch at turning point, history infeasible");
    while (t < spec.span - 1e-15 * spec.span && t - t_ev < 5.0 * h) {
      const double hh = std::min(h, spec.span - t);
      const double tau = t + hh;
      const double dm = t + 0.5 * hh - t_ev, de = tau - t_ev;
      const double rm2 = A2(t + 0.5 * hh) + c * c * dm * dm;
      const double re2 = A2(tau) + c * c * de * de;
      state.phi += hh / 6.0 *
                   (A(t) / (state.r * state.r) + 4.0 * A(t + 0.5 * hh) / rm2 +
                    A(tau) / re2);
      state.r = std::sqrt(re2);
      t = tau;
      const double f_now = c * c * de * de / re2;
      record(t, state, f_now);
      if (f_now > dip_guard) break;
    }
  };

  // Glides along the turning locus r = |A| (where dphi/dt = A/r^2 = 1/A)
  // until the locus stops rising. Returns true with t and state at the
  // bisected locus peak, or false if the locus still rises when the span
  // ends. Glide nodes are emitted with branch 0.
  const auto glide_to_peak = [&]() -> bool {
    const auto glide_step = [&](double to) {
      const double am = A(0.5 * (t + to)), ae = A(to), ab = A(t);
      if (std::fabs(am) <= tol || std::fabs(ae) <= tol || std::fabs(ab) <= tol)
        throw NumericalError("reconstruct: turning point with vanishing density");
      state.phi += (to - t) / 6.0 * (1.0 / ab + 4.0 / am + 1.0 / ae);
      state.r = std::fabs(ae);
      t = to;
    };
    while (t < spec.span - 1e-15 * spec.span) {
      const double tau = t + std::min(spec.step, spec.span - t);
      if (locus_slope(tau) <= 0.0) {
        double lo = t, hi = tau;
        for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (locus_slope(mid) > 0.0)
            lo = mid;
          else
            hi = mid;
        }
        glide_step(0.5 * (lo + hi));
        return true;
      }
      glide_step(tau);
      push(t, state, 0);
    }
    return false;
  };

  // Applies an event located at t_event. A flip to the outward branch, or to
  // the inward branch while the locus falls, is committed directly. A flip to
  // the inward branch against a rising locus is not locally solvable, and
  // integration drift makes genuine tangencies trip their event slightly
  // early, exactly into that situation; the only consistent continuation is
  // to glide along the locus and flip at its peak. This re-localizes
  // drift-advanced events onto the true turning point and absorbs grazing
  // histories (a locus that never stops rising) without flip chatter.
  const auto resolve_event = [&](double t_event, detail::ReconState s_event) {
    const double a0 = std::fabs(A(t_event));
    if (a0 <= tol)
      throw NumericalError("reconstruct: turning point with vanishing density");
    s_event.r = a0;  // project onto the turning locus r = |A|
    t = t_event;
    state = s_event;
    if (branch == +1 && locus_slope(t_event) > 0.0) {
#ifdef CFGEOM_TRACE_EVENTS
      std::fprintf(stderr, "[glide] from t=%.12g slope=%.3g\n", t_event,
                   locus_slope(t_event));
#endif
      push(t, state, 0);
      if (!glide_to_peak()) return;  // locus rose through the end of the span
#ifdef CFGEOM_TRACE_EVENTS
      std::fprintf(stderr, "[peak]  t=%.12g r=%.12g\n", t, state.r);
#endif
    }
    commit_flip(t, state);
    escape_after_flip(t);
  };

  // Every genuine event sits at a critical point of A^2: at a tangency both
  // w = r^2 - A^2 and dw/dt = 2 r dr/dt - (A^2)' vanish, and dr/dt is zero
  // there, so (A^2)' = 0. Locating the event as the nearest locus extremum
  // of the right kind (valley for inward motion, peak for outward) uses the
  // density history alone and is immune to integration drift, which shifts
  // the radicand zero by O(sqrt(drift)). Returns NaN when the locus is
  // monotone over the whole search window (a grazing contact).
  const auto nearest_locus_extremum = [&](double t_from) -> double {
    const bool valley = branch == -1;
    double u = t_from;
    double su = locus_slope(u);
    if (su == 0.0) return u;
    const double dir = (valley == (su < 0.0)) ? +1.0 : -1.0;
    const double window = 0.10 * spec.span;
    while (std::fabs(u - t_from) < window) {
      const double v = u + dir * spec.step;
      if (v < 0.0 || v > spec.span) break;
      const double sv = locus_slope(v);
      if ((su < 0.0) != (sv < 0.0)) {
        double lo = std::min(u, v), hi = std::max(u, v);
        double slo = locus_slope(lo);
        for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double smid = locus_slope(mid);
          if ((smid < 0.0) == (slo < 0.0)) {
            lo = mid;
            slo = smid;
          } else {
            hi = mid;
          }
        }
        return 0.5 * (lo + hi);
      }
      u = v;
      su = sv;
    }
    return std::numeric_limits<double>::quiet_NaN();
  };

  // Trajectory state at an arbitrary time at or before the current node:
  // rewinds the emitted samples past it and advances from the last one kept.
  const auto state_at = [&](double t_target) -> detail::ReconState {
    while (out.size() > 1 && out.back().t > t_target) out.pop_back();
    const ReconSample& base = out.back();
    const detail::ReconState s{base.r, base.phi};
    return detail::advance(A, base.t, s, t_target - base.t, branch, spec.step);
  };

  record(0.0, state, f0);

  while (t < spec.span - 1e-15 * spec.span) {
    const double h = std::min(spec.step, spec.span - t);
    const detail::ReconState trial = detail::rk4_step(A, t, state, h, branch);
    if (!(trial.r > 0)) throw NumericalError("reconstruct: radius collapsed");
    const double f_trial = detail::radicand(A, t + h, trial.r);

    if (f_trial < -tol && !armed && f_trial >= -hug_band) {
      // Constraint hugging while escaping the previous flip: project back
      // onto r = |A| and march on.
      detail::ReconState hugged = trial;
      hugged.r = std::fabs(A(t + h));
      if (hugged.r <= tol)
        throw NumericalError("reconstruct: turning point with vanishing density");
      t += h;
      state = hugged;
      record(t, state, 0.0);
      continue;
    }

    if (f_trial < -tol) {
#ifdef CFGEOM_TRACE_EVENTS
      std::fprintf(stderr, "[break] t=%.12g f_trial=%.3g r=%.12g\n", t + h, f_trial,
                   trial.r);
#endif
      // The radicand broke the tolerance band: a drift-shifted tangency.
      // Re-localize it onto the nearest locus extremum; a monotone locus
      // means a grazing contact, resolved at the break point itself (the
      // glide inside resolve_event then takes over).
      const double t_star = nearest_locus_extremum(t + h);
      if (std::isnan(t_star)) {
        resolve_event(t + h, trial);
      } else {
        resolve_event(t_star, state_at(t_star));
      }
      continue;
    }

    t += h;
    state = trial;
    record(t, state, f_trial);

    if (!armed) {
      if (f_trial > dip_guard) armed = true;
      continue;
    }
    if (recent.size() == 3) {
      const Node& a = recent[0];
      const Node& b = recent[1];
      const Node& c = recent[2];
      if (b.f < a.f && b.f <= c.f && b.f <= dip_guard) {
        // Candidate tangency in [a.t, c.t]: ternary search on the radicand.
        double lo = a.t, hi = c.t;
        const auto f_of = [&](double tau) {
          const detail::ReconState s =
              detail::advance(A, a.t, a.s, tau - a.t, branch, spec.step);
          return detail::radicand(A, tau, s.r);
        };
        for (int it = 0; it < 120 && hi - lo > 1e-12; ++it) {
          const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
          if (f_of(m1) <= f_of(m2))
            hi = m2;
          else
            lo = m1;
        }
        const double t_min = 0.5 * (lo + hi);
#ifdef CFGEOM_TRACE_EVENTS
        std::fprintf(stderr, "[dip] b.t=%.12g b.f=%.3g refined t=%.12g f=%.3g\n", b.t,
                     b.f, t_min, f_of(t_min));
#endif
        // Accept as a tangency if the refined minimum is zero up to the
        // radicand resolution achievable by the integrator (hug_band), a
        // wider mark than switch_tol itself.
        if (f_of(t_min) <= hug_band) {
          // A reachable tangency: re-localize onto the locus extremum and
          // rewind the emitted samples past it.
          const double t_star = nearest_locus_extremum(t_min);
          const double t_event = std::isnan(t_star) ? t_min : t_star;
          resolve_event(t_event, state_at(t_event));
        }
      }
    }
  }
  return out;
}

/// Round trip through a preset: sample its true areal density along
/// arclength, reconstruct from the initial state at arclength s0, and
/// report the largest distance from any reconstructed node to the curve.
struct RoundtripReport {
  double max_distance = 0.0;
  std::size_t steps = 0;
  int branch_flips = 0;
  double span = 0.0;
  double step = 0.0;
};

inline RoundtripReport roundtrip_error(const Preset& preset, double s0,
                                       double span, double step,
                                       double switch_tol = 1e-9) {
  const ParamCurve arc = by_arclength(preset.curve);
  const double L = arc.t_hi;
  if (!(s0 >= 0.0 && s0 <= L))
    throw std::domain_error("roundtrip_error: s0 outside the curve domain");
  const auto wrap = [L](double s) {
    double u = std::fmod(s, L);
    return u < 0 ? u + L : u;
  };
  if (!preset.closed && s0 + span > L * (1.0 + 1e-12))
    throw std::domain_error("roundtrip_error: span leaves the curve domain");

  const Vec2 O = preset.O;
  ReconstructionSpec spec;
  spec.A_fn = [&arc, O, s0, wrap, closed = preset.closed, L](double tau) {
    const double s = closed ? wrap(s0 + tau) : std::min(s0 + tau, L);
    return areal_density(arc, O, s);
  };
  const Vec2 g0 = arc.eval(s0), d0 = arc.deriv1(s0);
  const Vec2 rv = g0 - O;
  const double r0 = std::hypot(rv.x, rv.y);
  spec.start.r = r0;
  spec.start.phi = std::atan2(rv.y, rv.x);
  spec.start.branch = (rv.x * d0.x + rv.y * d0.y) >= 0 ? +1 : -1;
  spec.span = span;
  spec.step = step;
  spec.switch_tol = switch_tol;

  const std::vector<ReconSample> samples = reconstruct(spec);

  RoundtripReport rep;
  rep.steps = samples.size();
  rep.span = span;
  rep.step = step;
  int flips = 0;
  int prev_branch = samples.empty() ? +1 : samples.front().branch;

  for (const ReconSample& smp : samples) {
    if (smp.branch != prev_branch && smp.branch != 0) ++flips;
    prev_branch = smp.branch == 0 ? prev_branch : smp.branch;
    const Vec2 p{O.x + smp.x, O.y + smp.y};
    // Nearest point on the curve, seeded at the true arclength.
    double u = preset.closed ? wrap(s0 + smp.t) : std::min(s0 + smp.t, L);
    for (int it = 0; it < 6; ++it) {
      const Vec2 g = arc.eval(u), dg = arc.deriv1(u), d2g = arc.deriv2(u);
      const Vec2 e{g.x - p.x, g.y - p.y};
      const double psi = e.x * dg.x + e.y * dg.y;
      const double dpsi = 1.0 + e.x * d2g.x + e.y * d2g.y;
      if (dpsi == 0.0) break;
      u -= psi / dpsi;
      u = preset.closed ? wrap(u) : std::min(std::max(u, 0.0), L);
    }
    const Vec2 gq = arc.eval(u);
    const double d_newton = std::hypot(gq.x - p.x, gq.y - p.y);
    const Vec2 gs = arc.eval(preset.closed ? wrap(s0 + smp.t) : std::min(s0 + smp.t, L));
    const double d_seed = std::hypot(gs.x - p.x, gs.y - p.y);
    const double d = std::min(d_newton, d_seed);
    if (d > rep.max_distance) rep.max_distance = d;
  }
  rep.branch_flips = flips;
  return rep;
}

}  // namespace cfgeom
