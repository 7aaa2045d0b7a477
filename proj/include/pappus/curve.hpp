// SPDX-License-Identifier: Apache-2.0
// Copyright 2026, the pappus authors
#pragma once

#include <pappus/body.hpp>
#include <pappus/csv.hpp>
#include <pappus/defaults.hpp>
#include <pappus/types.hpp>

#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace pappus {

/// V(n, p): volume of the part of K on the side <x - p, n> <= 0.
inline double cut_volume(const ConvexBody& body, const Vec3& n, const Vec3& p, const HalfspaceOptions& opt = {}) {
  return halfspace_volume(body, n.normalized(), p, opt);
}

/// The 12 vertices of an icosahedron, in a fixed order.
inline const std::array<Vec3, 12>& icosahedral_directions() {
  static const std::array<Vec3, 12> dirs = [] {
    const double g = 0.5 * (1.0 + std::sqrt(5.0));
    std::array<Vec3, 12> d{Vec3(0, 1, g),  Vec3(0, -1, g),  Vec3(0, 1, -g),  Vec3(0, -1, -g),
                           Vec3(1, g, 0),  Vec3(-1, g, 0),  Vec3(1, -g, 0),  Vec3(-1, -g, 0),
                           Vec3(g, 0, 1),  Vec3(-g, 0, 1),  Vec3(g, 0, -1),  Vec3(-g, 0, -1)};
    for (auto& v : d) v.normalize();
    return d;
  }();
  return dirs;
}

struct CutOptions {
  double residual_tol = defaults::cut_residual_tol;  // times bounding radius
  int max_iter = defaults::cut_max_iter;
  double fd_step = 1e-7;                             // radians
  int samples = defaults::section_samples;
  HalfspaceOptions volume{};
};

/// Result of a local cut search from one starting normal.
struct LocalCut {
  Vec3 n = Vec3::UnitZ();
  double area = 0.0;
  double residual = std::numeric_limits<double>::infinity();  // |c(n, p) - p|
  bool converged = false;
  bool minimum = false;  // Hessian of V positive semidefinite at n
  int iterations = 0;
};

namespace detail {

struct CutEval {
  double area = 0.0;
  Vec2 r = Vec2::Zero();  // (c - p) in the tangent basis (e1, e2) of the base normal
  Vec3 c = Vec3::Zero();
  bool ok = false;
};

inline CutEval eval_cut(const ConvexBody& body, const Vec3& p, const Vec3& n, const Vec3& e1, const Vec3& e2,
                        int samples) {
  SectionOptions so;
  so.samples = samples;
  so.with_perimeter = false;
  so.pole = p;
  so.keep_pole = true;
  const SectionProfile prof = cross_section(body, SectionPlane::through(p, n), so);
  CutEval out;
  if (prof.empty) return out;
  out.ok = true;
  out.area = prof.area;
  out.c = prof.centroid;
  const Vec3 d = prof.centroid - p;
  out.r = Vec2(d.dot(e1), d.dot(e2));
  return out;
}

inline Vec3 rotate_normal(const Vec3& n, const Vec3& e1, const Vec3& e2, const Vec2& xi) {
  const double a = xi.norm();
  if (a == 0.0) return n;
  const Vec3 t = (xi[0] * e1 + xi[1] * e2) / a;
  return (std::cos(a) * n + std::sin(a) * t).normalized();
}

}  // namespace detail

/// Stationary point of V(., p) near `n0`: Newton on the centroid residual
/// c(n, p) - p (the sphere gradient of V is A (p - c)), falling back to
/// Armijo gradient steps on V while the Hessian is not positive definite.
inline LocalCut refine_cut(const ConvexBody& body, const Vec3& p, const Vec3& n0, const CutOptions& opt = {}) {
  const double scale = body.bounding_radius();
  const double tol = opt.residual_tol * scale;
  const double polish_tol = 1e-15 * scale;
  constexpr double max_step = 0.5;
  LocalCut out;
  Vec3 n = n0.normalized();
  std::optional<double> v_here;
  auto volume = [&](const Vec3& m) { return cut_volume(body, m, p, opt.volume); };

  for (int it = 0; it < opt.max_iter; ++it) {
    out.iterations = it + 1;
    const Vec3 e1 = any_orthogonal(n), e2 = n.cross(e1);
    const detail::CutEval base = detail::eval_cut(body, p, n, e1, e2, opt.samples);
    if (!base.ok) throw NumericError("refine_cut: empty section through an interior point");
    const double res = base.r.norm();
    out.n = n;
    out.area = base.area;
    out.residual = res;

    // Forward-difference Jacobian of the residual in tangent coordinates.
    Eigen::Matrix2d J;
    for (int k = 0; k < 2; ++k) {
      Vec2 xi = Vec2::Zero();
      xi[k] = opt.fd_step;
      const detail::CutEval e = detail::eval_cut(body, p, detail::rotate_normal(n, e1, e2, xi), e1, e2, opt.samples);
      if (!e.ok) throw NumericError("refine_cut: empty section through an interior point");
      J.col(k) = (e.r - base.r) / opt.fd_step;
    }
    // V's Hessian is -A J (up to terms vanishing at stationarity).
    const Eigen::Matrix2d H = -0.5 * (J + J.transpose());
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(H);
    const double hmin = es.eigenvalues().minCoeff(), hmax = std::max(std::abs(es.eigenvalues().maxCoeff()), 1e-300);
    const bool convex = hmin > -1e-8 * hmax;
    out.minimum = convex;
    if (res <= tol && convex) out.converged = true;
    if (res <= polish_tol) break;

    Vec2 xi;
    bool newton = convex && std::abs(J.determinant()) > 1e-14 * hmax * hmax;
    if (newton) {
      xi = -J.partialPivLu().solve(base.r);
      if (!(xi.allFinite())) newton = false;
    }
    if (newton) {
      if (xi.norm() > max_step) xi *= max_step / xi.norm();
      // Accept while the residual shrinks; otherwise backtrack.
      bool accepted = false;
      for (int bt = 0; bt < 30; ++bt) {
        const Vec3 cand = detail::rotate_normal(n, e1, e2, xi);
        const Vec3 c1 = any_orthogonal(cand), c2 = cand.cross(c1);
        const detail::CutEval e = detail::eval_cut(body, p, cand, c1, c2, opt.samples);
        if (e.ok && e.r.norm() < res) {
          n = cand;
          accepted = true;
          break;
        }
        xi *= 0.5;
      }
      v_here.reset();
      if (!accepted) {
        if (out.converged) break;  // at the noise floor
        newton = false;
      } else {
        continue;
      }
    }
    // Gradient step: rotate n towards c - p, Armijo on V.
    const double len = std::sqrt(base.area);
    Vec2 dir = base.r;
    if (dir.norm() == 0.0) break;
    xi = 0.5 * dir / len;
    if (xi.norm() > max_step) xi *= max_step / xi.norm();
    if (!v_here) v_here = volume(n);
    const double slope = base.area * base.r.dot(xi);  // -dV along xi
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt) {
      const Vec3 cand = detail::rotate_normal(n, e1, e2, xi);
      const double vc = volume(cand);
      if (vc <= *v_here - 1e-4 * slope) {
        n = cand;
        v_here = vc;
        moved = true;
        break;
      }
      xi *= 0.5;
    }
    if (!moved) break;
  }
  return out;
}

/// Volume distance v(p) = min_n V(n, p) and the barycentric cut realising it.
struct BarycentricCut {
  Vec3 n = Vec3::UnitZ();
  double delta = 0.0;
  double area = 0.0;
  double residual = 0.0;
  int start_index = 0;
  bool certified = false;  // delta <= V(u, p) at all icosahedral probes
  /// All distinct local minima found (more than 5 degrees apart) and their V.
  std::vector<Vec3> minima;
  std::vector<double> minima_delta;

  /// Another minimum ties with the returned one.
  bool ambiguous(double rel_tol = 1e-7) const {
    int ties = 0;
    for (double d : minima_delta) {
      if (d <= delta + rel_tol * std::max(delta, 1e-300)) ++ties;
    }
    return ties > 1;
  }
};

/// Multi-start search over the icosahedral directions. Ties are broken by
/// the lowest start index.
inline BarycentricCut volume_distance(const ConvexBody& body, const Vec3& p, const CutOptions& opt = {}) {
  if (!(body.value(p) < 0.0)) throw ValidationError("volume_distance: point is not interior");
  const auto& starts = icosahedral_directions();
  const double distinct = defaults::cut_distinct_angle * pi / 180.0;
  BarycentricCut best;
  bool found = false;
  LocalCut best_iterate;
  for (int k = 0; k < static_cast<int>(starts.size()); ++k) {
    const LocalCut lc = refine_cut(body, p, starts[k], opt);
    if (lc.residual < best_iterate.residual) best_iterate = lc;
    if (!lc.converged || !lc.minimum) continue;
    bool seen = false;
    for (const Vec3& m : best.minima) {
      if (angle_between(m, lc.n) <= distinct) seen = true;
    }
    if (seen) continue;
    const double v = cut_volume(body, lc.n, p, opt.volume);
    best.minima.push_back(lc.n);
    best.minima_delta.push_back(v);
    const double tie = 1e-12 * std::max(v, 1e-300);
    if (!found || v < best.delta - tie) {
      found = true;
      best.n = lc.n;
      best.delta = v;
      best.area = lc.area;
      best.residual = lc.residual;
      best.start_index = k;
    }
  }
  if (!found) {
    std::ostringstream msg;
    msg << "volume_distance: no start converged within " << opt.max_iter << " iterations; best iterate n=("
        << best_iterate.n.transpose() << ") residual " << best_iterate.residual;
    throw NumericError(msg.str());
  }
  best.certified = true;
  const double slack = 1e-9 * std::max(best.delta, body.bounding_radius() * body.bounding_radius() *
                                                       body.bounding_radius() * 1e-6);
  for (const Vec3& u : starts) {
    if (cut_volume(body, u, p, opt.volume) < best.delta - slack) best.certified = false;
  }
  return best;
}

enum class StopReason { reached_boundary, reached_sigma, area_floor, step_failure, max_steps };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::reached_boundary: return "reached_boundary";
    case StopReason::reached_sigma: return "reached_sigma";
    case StopReason::area_floor: return "area_floor";
    case StopReason::step_failure: return "step_failure";
    case StopReason::max_steps: return "max_steps";
  }
  return "unknown";
}

struct TraceSample {
  double s = 0.0;
  Vec3 gamma = Vec3::Zero();
  Vec3 n = Vec3::UnitZ();  // barycentric-cut normal (points towards growing delta)
  double delta = 0.0;
  double area = 0.0;
  double residual = 0.0;
};

/// One direction of a centroid-curve trace, ordered away from p0.
struct TraceBranch {
  std::vector<TraceSample> samples;
  StopReason stop = StopReason::max_steps;
  std::string diagnostics;
};

struct CentroidCurveTrace {
  TraceBranch forward;   // delta increasing, s >= 0
  TraceBranch backward;  // delta decreasing, s <= 0
  bool p0_on_boundary = false;

  /// Backward branch reversed, then the forward branch: s ascending, p0 once.
  std::vector<TraceSample> two_sided() const {
    std::vector<TraceSample> out(backward.samples.rbegin(), backward.samples.rend());
    if (!out.empty() && !forward.samples.empty()) out.pop_back();
    out.insert(out.end(), forward.samples.begin(), forward.samples.end());
    return out;
  }
};

struct TraceOptions {
  std::optional<double> h;               // default bounding radius / 500
  std::optional<double> delta_max;       // default sigma (when known)
  std::optional<double> delta_min;       // default 1e-6 * bounding radius^3
  std::optional<double> area_floor;      // default 1e-6 * bounding radius^2
  bool forward = true;
  bool backward = true;
  int basin_check_every = defaults::trace_basin_check_every;
  double max_turn_deg = defaults::trace_max_turn;
  int max_steps = defaults::trace_max_steps;
  CutOptions cut{};
};

namespace detail {

inline Vec3 inner_normal(const ConvexBody& body, const Vec3& x) { return -body.gradient(x).normalized(); }

inline bool on_boundary(const ConvexBody& body, const Vec3& x) {
  const double scale = body.gradient(x).norm() * body.bounding_radius();
  return std::abs(body.value(x)) <= 1e-12 * scale;
}

// The barycentric-cut normal field, extended to boundary points by the inner
// surface normal (the limit of the cut normal as delta -> 0).
struct CutField {
  const ConvexBody& body;
  const CutOptions& opt;

  std::optional<LocalCut> operator()(const Vec3& x, const Vec3& guess) const {
    if (on_boundary(body, x)) {
      LocalCut lc;
      lc.n = inner_normal(body, x);
      lc.converged = lc.minimum = true;
      lc.area = 0.0;
      lc.residual = 0.0;
      return lc;
    }
    if (!(body.value(x) < 0.0)) return std::nullopt;
    LocalCut lc = refine_cut(body, x, guess, opt);
    if (!lc.converged) return std::nullopt;
    return lc;
  }
};

}  // namespace detail

/// Integrates gamma' = n(gamma) (forward, delta growing) and gamma' = -n
/// (backward, towards the boundary) with classical RK4 in arc length. Stage
/// cuts are warm-started from the previous normal; a full multi-start
/// search runs every `basin_check_every` steps.
inline CentroidCurveTrace trace_centroid_curve(const ConvexBody& body, const Vec3& p0, const TraceOptions& opt = {}) {
  const double R = body.bounding_radius();
  const double h = opt.h.value_or(R * defaults::trace_step_fraction);
  if (!(h > 0.0)) throw ValidationError("trace: step must be positive");
  const std::optional<double> sigma = body.sigma();
  const double delta_max = opt.delta_max ? *opt.delta_max : sigma.value_or(std::numeric_limits<double>::infinity());
  const double delta_min = opt.delta_min.value_or(1e-6 * R * R * R);
  const double area_floor = opt.area_floor.value_or(defaults::trace_area_floor * R * R);
  if (body.value(p0) > 0.0 && !detail::on_boundary(body, p0)) throw ValidationError("trace: p0 lies outside the body");

  CentroidCurveTrace trace;
  TraceSample start;
  start.gamma = p0;
  if (detail::on_boundary(body, p0)) {
    trace.p0_on_boundary = true;
    start.n = detail::inner_normal(body, p0);
  } else {
    const BarycentricCut cut = volume_distance(body, p0, opt.cut);
    if (cut.ambiguous()) {
      throw ValidationError(
          "trace: p0 has several barycentric cuts of equal volume; the centroid curve is only unique near the "
          "boundary, choose p0 closer to it");
    }
    if (sigma && !opt.delta_max && !(cut.delta < *sigma)) {
      throw ValidationError("trace: volume distance at p0 is not below sigma = 2 pi rho^3 / 3");
    }
    start.n = cut.n;
    start.delta = cut.delta;
    start.area = cut.area;
    start.residual = cut.residual;
  }

  const detail::CutField field{body, opt.cut};
  const double max_turn = opt.max_turn_deg * pi / 180.0;

  auto run = [&](double sign) {
    TraceBranch br;
    br.samples.push_back(start);
    if (sign < 0.0 && trace.p0_on_boundary) {
      br.stop = StopReason::reached_boundary;
      return br;
    }
    // One RK4 step of length t from sample `a`; nullopt if a stage leaves K.
    auto step = [&](const TraceSample& a, double t) -> std::optional<TraceSample> {
      const Vec3 k1 = sign * a.n;
      auto stage = [&](const Vec3& x, const Vec3& guess) -> std::optional<Vec3> {
        const auto lc = field(x, guess);
        if (!lc) return std::nullopt;
        return Vec3(sign * lc->n);
      };
      const auto k2 = stage(a.gamma + 0.5 * t * k1, a.n);
      if (!k2) return std::nullopt;
      const auto k3 = stage(a.gamma + 0.5 * t * *k2, sign * *k2);
      if (!k3) return std::nullopt;
      const auto k4 = stage(a.gamma + t * *k3, sign * *k3);
      if (!k4) return std::nullopt;
      TraceSample b;
      b.s = a.s + sign * t;
      b.gamma = a.gamma + t / 6.0 * (k1 + 2.0 * *k2 + 2.0 * *k3 + *k4);
      const auto lc = field(b.gamma, sign * *k4);
      if (!lc) return std::nullopt;
      b.n = lc->n;
      b.area = lc->area;
      b.residual = lc->residual;
      b.delta = (lc->area == 0.0) ? 0.0 : cut_volume(body, b.n, b.gamma, opt.cut.volume);
      return b;
    };

    for (int i = 0; i < opt.max_steps; ++i) {
      const TraceSample& a = br.samples.back();
      // delta' = A: stop once the next step could reach delta_max (with a
      // half-step margin, since delta_max may sit on a singular point).
      if (sign > 0.0 && a.delta + 1.5 * a.area * h >= delta_max) {
        br.stop = StopReason::reached_sigma;
        return br;
      }
      std::optional<TraceSample> b = step(a, h);
      if (sign < 0.0 && (!b || b->delta <= delta_min)) {
        // Shorten the last step to land on delta_min.
        double lo = 0.0, hi = h;
        double d_lo = a.delta;
        std::optional<TraceSample> land;
        for (int it = 0; it < 80; ++it) {
          const double t = 0.5 * (lo + hi);
          const auto c = step(a, t);
          if (c && c->delta > delta_min) {
            lo = t;
            d_lo = c->delta;
            land = c;
          } else {
            hi = t;
            if (c) land = c;
          }
          if (land && std::abs(land->delta - delta_min) <= 1e-6 * delta_min) break;
          if (hi - lo <= 1e-15 * h) break;
        }
        (void)d_lo;
        if (land && land->delta > 0.0) br.samples.push_back(*land);
        br.stop = StopReason::reached_boundary;
        return br;
      }
      if (!b) {
        br.stop = StopReason::step_failure;
        br.diagnostics = "cut search failed at a stage point";
        return br;
      }
      const double turn = angle_between(a.n, b->n);
      if (turn > max_turn) {
        std::ostringstream msg;
        msg << "cut normal turned by " << turn * 180.0 / pi << " degrees at s=" << b->s;
        br.stop = StopReason::step_failure;
        br.diagnostics = msg.str();
        return br;
      }
      if (sign > 0.0 ? !(b->delta > a.delta) : !(b->delta < a.delta)) {
        std::ostringstream msg;
        msg << "volume distance not monotone at s=" << b->s << " (" << a.delta << " -> " << b->delta << ")";
        br.stop = StopReason::step_failure;
        br.diagnostics = msg.str();
        return br;
      }
      if (sign > 0.0 && b->delta > delta_max) {
        br.stop = StopReason::reached_sigma;
        return br;
      }
      if (opt.basin_check_every > 0 && (i + 1) % opt.basin_check_every == 0 && b->area > 0.0) {
        const BarycentricCut full = volume_distance(body, b->gamma, opt.cut);
        if (angle_between(full.n, b->n) > 1e-3) {
          std::ostringstream msg;
          msg << "basin check at s=" << b->s << ": global cut differs from the tracked one by "
              << angle_between(full.n, b->n) * 180.0 / pi << " degrees";
          br.stop = StopReason::step_failure;
          br.diagnostics = msg.str();
          return br;
        }
      }
      br.samples.push_back(*b);
      if (b->area < area_floor) {
        br.stop = StopReason::area_floor;
        return br;
      }
    }
    br.stop = StopReason::max_steps;
    return br;
  };

  if (opt.forward) {
    trace.forward = run(1.0);
  } else {
    trace.forward.samples.push_back(start);
  }
  if (opt.backward) {
    trace.backward = run(-1.0);
  } else {
    trace.backward.samples.push_back(start);
  }
  return trace;
}

/// Closed-form centroid curve of the ellipsoid through p0 (x0 > 0):
///   y = y0 (x/x0)^(a^2/b^2),  z = z0 (x/x0)^(a^2/c^2).
inline Vec2 ellipsoid_centroid_curve(double a, double b, double c, const Vec3& p0, double x) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw ValidationError("ellipsoid semi-axes must be positive");
  if (!(p0.x() > 0.0)) throw ValidationError("closed form needs x0 > 0");
  if (!(x > 0.0)) throw ValidationError("closed form holds for x > 0 only");
  const double q = x / p0.x();
  return {p0.y() * std::pow(q, a * a / (b * b)), p0.z() * std::pow(q, a * a / (c * c))};
}

/// Barycentric-cut normal of the ellipsoid at p (inner normal of the
/// homothetic floating ellipsoid through p).
inline Vec3 ellipsoid_cut_normal(const Vec3& semi_axes, const Vec3& p) {
  const double a = semi_axes[0], b = semi_axes[1], c = semi_axes[2];
  return -Vec3(b * c / a * p.x(), a * c / b * p.y(), a * b / c * p.z()).normalized();
}

/// Closest boundary point to an interior point q (fixed point of the normal
/// line through q).
inline Vec3 nearest_boundary_point(const ConvexBody& body, const Vec3& q) {
  Vec3 dir = body.gradient(q).normalized();
  Vec3 x = q + ray_boundary_distance(body, q, dir) * dir;
  for (int it = 0; it < 200; ++it) {
    dir = body.gradient(x).normalized();
    const Vec3 next = q + ray_boundary_distance(body, q, dir) * dir;
    const double moved = (next - x).norm();
    x = next;
    if (moved <= 1e-15 * body.bounding_radius()) break;
  }
  return x;
}

/// Angle between the terminal cut normal of a trace that ended at the
/// boundary and the inner surface normal at the nearest boundary point.
inline double boundary_approach_angle(const TraceBranch& branch, const ConvexBody& body) {
  if (branch.stop != StopReason::reached_boundary || branch.samples.empty()) {
    throw ValidationError("boundary_approach_angle: trace did not end at the boundary");
  }
  const TraceSample& end = branch.samples.back();
  if (detail::on_boundary(body, end.gamma)) return angle_between(end.n, detail::inner_normal(body, end.gamma));
  const Vec3 q = nearest_boundary_point(body, end.gamma);
  if ((q - end.gamma).norm() > 1e-2 * body.bounding_radius()) {
    throw ValidationError("boundary_approach_angle: terminal point is not close to the boundary");
  }
  return angle_between(end.n, detail::inner_normal(body, q));
}

inline void write_trace_csv(std::ostream& os, const std::vector<TraceSample>& samples) {
  csv::write_header(os, {"s", "x", "y", "z", "nx", "ny", "nz", "delta", "A"});
  for (const auto& t : samples) {
    csv::write_row(os, {t.s, t.gamma.x(), t.gamma.y(), t.gamma.z(), t.n.x(), t.n.y(), t.n.z(), t.delta, t.area});
  }
}

inline std::vector<TraceSample> read_trace_csv(std::istream& is) {
  const csv::Table t = csv::read(is);
  const std::size_t c[9] = {t.column("s"),  t.column("x"),  t.column("y"),     t.column("z"), t.column("nx"),
                            t.column("ny"), t.column("nz"), t.column("delta"), t.column("A")};
  std::vector<TraceSample> out;
  for (const auto& r : t.rows) {
    TraceSample smp;
    smp.s = r[c[0]];
    smp.gamma = Vec3(r[c[1]], r[c[2]], r[c[3]]);
    smp.n = Vec3(r[c[4]], r[c[5]], r[c[6]]);
    smp.delta = r[c[7]];
    smp.area = r[c[8]];
    out.push_back(smp);
  }
  return out;
}

}  // namespace pappus
