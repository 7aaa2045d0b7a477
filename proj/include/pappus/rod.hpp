// SPDX-License-Identifier: Apache-2.0
// Copyright 2026, the pappus authors
#pragma once

#include <pappus/frames.hpp>
#include <pappus/quadrature.hpp>
#include <pappus/types.hpp>
#include <pappus/volume.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace pappus {

/// Planar profile shapes in (u, v) coordinates. Analytic shapes are centred
/// at the origin with their axes along u and v.
namespace shape {
struct Polygon {
  std::vector<Vec2> vertices;
};
struct Disk {
  double r = 0.0;
};
struct Rectangle {
  double w = 0.0;  // extent along u
  double h = 0.0;  // extent along v
};
struct Ellipse {
  double a = 0.0;  // semi-axis along u
  double b = 0.0;  // semi-axis along v
};
}  // namespace shape

using ProfileShape = std::variant<shape::Polygon, shape::Disk, shape::Rectangle, shape::Ellipse>;

/// Mirror symmetry of a profile: u_axis means invariant under v -> -v.
enum class Symmetry { none, u_axis, v_axis, both };

inline const char* to_string(Symmetry s) {
  switch (s) {
    case Symmetry::none: return "none";
    case Symmetry::u_axis: return "u-axis";
    case Symmetry::v_axis: return "v-axis";
    case Symmetry::both: return "both";
  }
  return "?";
}

/// Area moments about the coordinate origin, not the centroid.
struct RawMoments {
  double area = 0.0;
  double su = 0.0, sv = 0.0;            // int u, int v
  double juu = 0.0, jvv = 0.0, juv = 0.0;  // int u^2, int v^2, int u v
};

/// Green's theorem moments of a counterclockwise simple polygon.
inline RawMoments polygon_raw_moments(const std::vector<Vec2>& p) {
  RawMoments m;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = p[i];
    const Vec2& b = p[(i + 1) % n];
    const double cr = a[0] * b[1] - b[0] * a[1];
    m.area += cr;
    m.su += (a[0] + b[0]) * cr;
    m.sv += (a[1] + b[1]) * cr;
    m.juu += (a[0] * a[0] + a[0] * b[0] + b[0] * b[0]) * cr;
    m.jvv += (a[1] * a[1] + a[1] * b[1] + b[1] * b[1]) * cr;
    m.juv += (a[0] * b[1] + 2.0 * a[0] * a[1] + 2.0 * b[0] * b[1] + b[0] * a[1]) * cr;
  }
  m.area /= 2.0;
  m.su /= 6.0;
  m.sv /= 6.0;
  m.juu /= 12.0;
  m.jvv /= 12.0;
  m.juv /= 24.0;
  return m;
}

namespace detail {

inline double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

inline bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  auto on_segment = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    return std::min(a[0], b[0]) <= c[0] && c[0] <= std::max(a[0], b[0]) && std::min(a[1], b[1]) <= c[1] &&
           c[1] <= std::max(a[1], b[1]);
  };
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

inline bool polygon_is_simple(const std::vector<Vec2>& p) {
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;  // adjacent edges share a vertex
      if (segments_intersect(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n])) return false;
    }
  }
  return true;
}

// Every mirrored vertex has a partner in the original set.
inline bool mirror_invariant(const std::vector<Vec2>& p, const Vec2& flip, double tol) {
  for (const Vec2& a : p) {
    const Vec2 m = a.cwiseProduct(flip);
    const bool found = std::any_of(p.begin(), p.end(), [&](const Vec2& b) { return (b - m).norm() <= tol; });
    if (!found) return false;
  }
  return true;
}

}  // namespace detail

/// Profile with centroidal moments: Iu = int v^2, Iv = int u^2, Iuv = int u v.
struct Profile {
  ProfileShape shape;  // polygons are stored recentred and counterclockwise
  Vec2 shift = Vec2::Zero();  // centroid of the input polygon, removed by recentring
  double area = 0.0;
  double Iu = 0.0, Iv = 0.0, Iuv = 0.0;
  Symmetry symmetry = Symmetry::none;
  double extent = 0.0;  // max |u|
  double u_min = 0.0, u_max = 0.0;
  double perimeter = 0.0;
  std::vector<std::string> warnings;

  bool symmetric() const { return symmetry != Symmetry::none; }

  bool contains(const Vec2& uv) const {
    return std::visit(
        [&](const auto& s) -> bool {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, shape::Disk>) {
            return uv.squaredNorm() < s.r * s.r;
          } else if constexpr (std::is_same_v<S, shape::Rectangle>) {
            return std::abs(uv[0]) < 0.5 * s.w && std::abs(uv[1]) < 0.5 * s.h;
          } else if constexpr (std::is_same_v<S, shape::Ellipse>) {
            const double p = uv[0] / s.a, q = uv[1] / s.b;
            return p * p + q * q < 1.0;
          } else {
            bool in = false;
            const auto& p = s.vertices;
            for (std::size_t i = 0, j = p.size() - 1; i < p.size(); j = i++) {
              if ((p[i][1] > uv[1]) != (p[j][1] > uv[1]) &&
                  uv[0] < (p[j][0] - p[i][0]) * (uv[1] - p[i][1]) / (p[j][1] - p[i][1]) + p[i][0]) {
                in = !in;
              }
            }
            return in;
          }
        },
        shape);
  }

  /// Boundary points, counterclockwise; analytic shapes use `samples` points.
  std::vector<Vec2> boundary(int samples = defaults::section_samples) const {
    if (const auto* poly = std::get_if<shape::Polygon>(&shape)) return poly->vertices;
    std::vector<Vec2> out;
    if (const auto* r = std::get_if<shape::Rectangle>(&shape)) {
      const double a = 0.5 * r->w, b = 0.5 * r->h;
      return {{a, -b}, {a, b}, {-a, b}, {-a, -b}};
    }
    out.reserve(samples);
    for (int k = 0; k < samples; ++k) {
      const double t = 2.0 * pi * k / samples;
      if (const auto* d = std::get_if<shape::Disk>(&shape)) {
        out.emplace_back(d->r * std::cos(t), d->r * std::sin(t));
      } else {
        const auto& e = std::get<shape::Ellipse>(shape);
        out.emplace_back(e.a * std::cos(t), e.b * std::sin(t));
      }
    }
    return out;
  }
};

/// Moments of a shape. Polygons are recentred on their centroid; clockwise
/// input is reversed with a warning.
inline Profile profile_moments(const ProfileShape& input) {
  Profile out;
  out.shape = input;
  if (const auto* d = std::get_if<shape::Disk>(&input)) {
    if (!(d->r > 0.0)) throw ValidationError("disk profile radius must be positive");
    const double r2 = d->r * d->r;
    out.area = pi * r2;
    out.Iu = out.Iv = pi * r2 * r2 / 4.0;
    out.symmetry = Symmetry::both;
    out.extent = out.u_max = d->r;
    out.u_min = -d->r;
    out.perimeter = 2.0 * pi * d->r;
    return out;
  }
  if (const auto* r = std::get_if<shape::Rectangle>(&input)) {
    if (!(r->w > 0.0 && r->h > 0.0)) throw ValidationError("rectangle profile sides must be positive");
    out.area = r->w * r->h;
    out.Iv = r->h * r->w * r->w * r->w / 12.0;
    out.Iu = r->w * r->h * r->h * r->h / 12.0;
    out.symmetry = Symmetry::both;
    out.extent = out.u_max = 0.5 * r->w;
    out.u_min = -0.5 * r->w;
    out.perimeter = 2.0 * (r->w + r->h);
    return out;
  }
  if (const auto* e = std::get_if<shape::Ellipse>(&input)) {
    if (!(e->a > 0.0 && e->b > 0.0)) throw ValidationError("ellipse profile semi-axes must be positive");
    out.area = pi * e->a * e->b;
    out.Iv = pi * e->a * e->a * e->a * e->b / 4.0;
    out.Iu = pi * e->a * e->b * e->b * e->b / 4.0;
    out.symmetry = Symmetry::both;
    out.extent = out.u_max = e->a;
    out.u_min = -e->a;
    const auto perim = quad::integrate_adaptive(
        [&](double t) { return std::hypot(e->a * std::sin(t), e->b * std::cos(t)); }, 0.0, 2.0 * pi,
        {1e-14, 0.0, 8, 200});
    out.perimeter = perim.value;
    return out;
  }

  std::vector<Vec2> p = std::get<shape::Polygon>(input).vertices;
  if (p.size() < 3) throw ValidationError("polygon profile needs at least three vertices");
  if (!detail::polygon_is_simple(p)) throw ValidationError("polygon profile is self-intersecting");
  RawMoments raw = polygon_raw_moments(p);
  if (raw.area == 0.0) throw ValidationError("polygon profile has zero area");
  if (raw.area < 0.0) {
    std::reverse(p.begin(), p.end());
    out.warnings.emplace_back("polygon profile was clockwise; vertex order reversed");
    raw = polygon_raw_moments(p);
  }
  out.shift = Vec2(raw.su / raw.area, raw.sv / raw.area);
  for (Vec2& q : p) q -= out.shift;
  // Moments of the recentred polygon directly: no parallel-axis cancellation.
  const RawMoments m = polygon_raw_moments(p);
  out.area = m.area;
  out.Iv = m.juu;
  out.Iu = m.jvv;
  out.Iuv = m.juv;
  double scale = 0.0;
  out.u_min = p.front()[0];
  out.u_max = p.front()[0];
  for (std::size_t i = 0; i < p.size(); ++i) {
    scale = std::max(scale, p[i].norm());
    out.u_min = std::min(out.u_min, p[i][0]);
    out.u_max = std::max(out.u_max, p[i][0]);
    out.perimeter += (p[(i + 1) % p.size()] - p[i]).norm();
  }
  out.extent = std::max(out.u_max, -out.u_min);
  const double tol = 1e-10 * std::max(1.0, scale);
  const bool su = detail::mirror_invariant(p, Vec2(1.0, -1.0), tol);
  const bool sv = detail::mirror_invariant(p, Vec2(-1.0, 1.0), tol);
  out.symmetry = su && sv ? Symmetry::both : su ? Symmetry::u_axis : sv ? Symmetry::v_axis : Symmetry::none;
  out.shape = shape::Polygon{std::move(p)};
  return out;
}

/// Section of a rigid copy of `profile` in the normal plane at `smp`, with
/// its centroid at ribbon coordinates `offset`. Moments are exact.
inline SectionProfile section_from_profile(const Profile& profile, const RibbonSample& smp,
                                           const Vec2& offset = Vec2::Zero()) {
  SectionProfile out;
  out.plane = ribbon_plane(smp);
  out.empty = false;
  out.pole_local = offset;
  out.pole = out.plane.global(offset);
  out.area = profile.area;
  out.local_centroid = offset;
  out.centroid = out.pole;
  out.Iu = profile.Iu;
  out.Iv = profile.Iv;
  out.Iuv = profile.Iuv;
  out.boundary = profile.boundary();
  for (Vec2& b : out.boundary) b += offset;
  out.perimeter = profile.perimeter;
  out.boundary_line_centroid = offset;
  out.has_perimeter = profile.symmetry == Symmetry::both;
  return out;
}

struct RodSpec {
  Ribbon ribbon;
  Profile profile;
  bool one_sided_kappa = false;
};

/// Outcome of the three rod checks: a geodesic ribbon, a symmetric profile,
/// and a profile narrow enough for the sweep to stay injective.
struct RodConditions {
  bool a = false;
  bool b = false;
  bool c = false;
  double max_kappa_g = 0.0;
  double mu = 0.0;           // max |kn|
  double min_kappa_n = 0.0;  // signed
  double c_value = 0.0;      // extent * mu, or the one-sided product
  bool one_sided_used = false;
  std::vector<std::string> messages;

  bool ok() const { return a && b && c; }
};

namespace detail {

inline std::vector<RibbonSample> rod_check_samples(const Ribbon& ribbon) {
  if (ribbon.is_sampled()) return ribbon.samples();
  return ribbon.discretize(1025);
}

}  // namespace detail

inline RodConditions check_rod(const RodSpec& rod, double kappa_g_tol = defaults::kappa_g_tol) {
  RodConditions rc;
  const auto samples = detail::rod_check_samples(rod.ribbon);
  double worst_s = samples.front().s;
  rc.min_kappa_n = samples.front().curv.kappa_n;
  for (const auto& smp : samples) {
    if (std::abs(smp.curv.kappa_g) > rc.max_kappa_g) {
      rc.max_kappa_g = std::abs(smp.curv.kappa_g);
      worst_s = smp.s;
    }
    rc.mu = std::max(rc.mu, std::abs(smp.curv.kappa_n));
    rc.min_kappa_n = std::min(rc.min_kappa_n, smp.curv.kappa_n);
  }
  rc.a = rc.max_kappa_g <= kappa_g_tol;
  if (!rc.a) {
    std::ostringstream msg;
    msg << "rod ribbon is not geodesic: |kappa_g| = " << rc.max_kappa_g << " > " << kappa_g_tol
        << " at s=" << worst_s;
    rc.messages.push_back(msg.str());
  }
  rc.b = rod.profile.symmetric();
  if (!rc.b) rc.messages.emplace_back("rod profile is not symmetric about the u- or v-axis");
  rc.one_sided_used = rod.one_sided_kappa && rc.min_kappa_n > 0.0;
  rc.c_value = (rc.one_sided_used ? std::max(rod.profile.u_max, 0.0) : rod.profile.extent) * rc.mu;
  rc.c = rc.c_value < 1.0;
  if (!rc.c) {
    std::ostringstream msg;
    msg << "rod profile too wide for its curvature: " << (rc.one_sided_used ? "u_max" : "extent") << " * max|kappa_n| = " << rc.c_value
        << " >= 1, the swept profile overlaps itself";
    rc.messages.push_back(msg.str());
  }
  return rc;
}

struct RodResult {
  double volume = 0.0;
  Vec3 centroid = Vec3::Zero();
  Vec3 curve_centroid = Vec3::Zero();
  RodConditions conditions;
};

/// Mean point of the curve, (1/L) int gamma ds.
inline Vec3 curve_centroid(const Ribbon& ribbon, int panels = 64, int order = 8) {
  const quad::NodeSet ns = quad::composite_gauss(ribbon.s_begin(), ribbon.s_end(), panels, order);
  Vec3 sum = Vec3::Zero();
  for (std::size_t i = 0; i < ns.x.size(); ++i) sum += ns.w[i] * ribbon.point(ns.x[i]);
  return sum / ribbon.length();
}

/// Centroid of a bent rod of constant symmetric profile along a geodesic
/// ribbon: c(K) = c(gamma) + Iv / (A L) (T(0) - T(L)), vol(K) = A L.
inline RodResult bent_rod_centroid(const RodSpec& rod) {
  RodResult out;
  out.conditions = check_rod(rod);
  if (!out.conditions.ok()) {
    std::string all;
    for (const auto& m : out.conditions.messages) all += (all.empty() ? "" : "; ") + m;
    throw ValidationError(all);
  }
  const double L = rod.ribbon.length();
  const double A = rod.profile.area;
  out.volume = A * L;
  out.curve_centroid = curve_centroid(rod.ribbon);
  const Vec3 dT = rod.ribbon.frame(rod.ribbon.s_begin()).T - rod.ribbon.frame(rod.ribbon.s_end()).T;
  out.centroid = out.curve_centroid + rod.profile.Iv / (A * L) * dT;
  return out;
}

/// Constant-section rod as a swept solid, for the general centroid formula
/// and Monte-Carlo oracles.
inline SweptSolid rod_solid(const RodSpec& rod) {
  const Profile prof = rod.profile;
  double reach = 0.0;
  for (const Vec2& b : prof.boundary()) reach = std::max(reach, b.norm());
  SweptSolid solid{rod.ribbon, {}, {}, reach};
  solid.section = [prof](const RibbonSample& smp) { return section_from_profile(prof, smp); };
  solid.inside = [prof](double, const Vec2& uv) { return prof.contains(uv); };
  return solid;
}

/// Moments of the generating profile of a body of revolution: area, distance
/// of its centroid from the axis, and its centroidal moment about an axis
/// parallel to the rotation axis.
struct RevolutionMoments {
  double A = 0.0;
  double r_bar = 0.0;
  double I_zbar = 0.0;

  double I_z() const { return A * r_bar * r_bar + I_zbar; }
};

/// Profile B0 in the (x, z) half-plane x > 0, rotated about the z-axis.
/// Ribbon coordinates of the matching arc are u = r_bar - x, v = z.
inline RevolutionMoments revolution_moments(const Profile& p, double r_bar) {
  if (!(r_bar > 0.0)) throw ValidationError("revolution profile needs r_bar > 0");
  if (!(p.u_max < r_bar)) throw ValidationError("revolution profile crosses the rotation axis");
  return {p.area, r_bar, p.Iv};
}

/// Centroid of the segment swept by rotating B0 through `alpha` about the
/// z-axis, starting in the xz-plane:
///   c = I_z / (A r_bar alpha) (sin alpha, 1 - cos alpha, 0).
inline Vec3 revolution_segment_centroid(const RevolutionMoments& m, double alpha) {
  if (!(alpha > 0.0)) throw ValidationError("revolution angle must be positive");
  if (alpha > 2.0 * pi) throw ValidationError("revolution angle exceeds a full turn");
  if (!(m.A > 0.0) || !(m.r_bar > 0.0)) throw ValidationError("revolution moments need A > 0 and r_bar > 0");
  const double k = m.I_z() / (m.A * m.r_bar * alpha);
  return k * Vec3(std::sin(alpha), 1.0 - std::cos(alpha), 0.0);
}

/// The circular-arc rod equivalent to a revolution segment.
inline RodSpec revolution_rod(const Profile& p, double r_bar, double alpha) {
  return RodSpec{Ribbon::arc(Vec3::Zero(), r_bar, alpha), p, false};
}

}  // namespace pappus
