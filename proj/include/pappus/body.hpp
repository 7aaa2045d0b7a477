// SPDX-License-Identifier: Apache-2.0
// Copyright 2026, the pappus authors
#pragma once

#include <pappus/defaults.hpp>
#include <pappus/quadrature.hpp>
#include <pappus/random.hpp>
#include <pappus/types.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <thread>
#include <variant>
#include <vector>

namespace pappus {

struct BallShape {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
};
struct EllipsoidShape {
  Vec3 center = Vec3::Zero();
  Vec3 semi_axes = Vec3::Ones();
};
/// |x/a|^p1 + |y/b|^p2 + |z/c|^p3 <= 1, exponents >= 2.
struct SuperquadricShape {
  Vec3 center = Vec3::Zero();
  Vec3 semi_axes = Vec3::Ones();
  Vec3 exponents = Vec3::Constant(4.0);
};
struct GenericShape {};
using BodyShape = std::variant<BallShape, EllipsoidShape, SuperquadricShape, GenericShape>;

/// Smooth convex body given by an implicit function F (F < 0 inside,
/// F = 0 on the boundary) and its gradient. Immutable.
class ConvexBody {
 public:
  using ScalarField = std::function<double(const Vec3&)>;
  using VectorField = std::function<Vec3(const Vec3&)>;
  /// Exact distance from an interior origin to the boundary along a unit
  /// direction; optional shortcut for quadrics.
  using RayCaster = std::function<double(const Vec3&, const Vec3&)>;
  /// Support point: a maximiser of <x, n> over K; optional.
  using SupportFn = std::function<Vec3(const Vec3&)>;

  struct Options {
    std::optional<double> min_curvature_radius;
    std::optional<double> volume;
    RayCaster ray;
    SupportFn support;
    BodyShape shape = GenericShape{};
  };

  ConvexBody(ScalarField f, VectorField grad, const Vec3& interior_hint, double bounding_radius)
      : ConvexBody(std::move(f), std::move(grad), interior_hint, bounding_radius, Options{}) {}

  ConvexBody(ScalarField f, VectorField grad, const Vec3& interior_hint, double bounding_radius, Options opt)
      : f_(std::move(f)), grad_(std::move(grad)), hint_(interior_hint), radius_(bounding_radius),
        opt_(std::move(opt)) {
    if (!(bounding_radius > 0.0)) throw ValidationError("bounding radius must be positive");
    if (!(f_(hint_) < 0.0)) throw ValidationError("interior hint is not inside the body");
  }

  static ConvexBody ball(const Vec3& center, double radius);
  static ConvexBody ellipsoid(const Vec3& center, const Vec3& semi_axes);
  static ConvexBody superquadric(const Vec3& center, const Vec3& semi_axes, const Vec3& exponents);

  double value(const Vec3& x) const { return f_(x); }
  Vec3 gradient(const Vec3& x) const { return grad_(x); }
  bool contains(const Vec3& x) const { return f_(x) < 0.0; }
  const Vec3& interior_hint() const { return hint_; }
  double bounding_radius() const { return radius_; }
  std::optional<double> min_curvature_radius() const { return opt_.min_curvature_radius; }
  std::optional<double> analytic_volume() const { return opt_.volume; }
  const BodyShape& shape() const { return opt_.shape; }
  const RayCaster& ray_caster() const { return opt_.ray; }
  const SupportFn& support_function() const { return opt_.support; }

  /// Floating-body existence bound 2 pi rho^3 / 3, when rho is known.
  std::optional<double> sigma() const {
    if (!opt_.min_curvature_radius) return std::nullopt;
    const double r = *opt_.min_curvature_radius;
    return 2.0 * pi * r * r * r / 3.0;
  }

 private:
  ScalarField f_;
  VectorField grad_;
  Vec3 hint_;
  double radius_;
  Options opt_;
};

namespace detail {

// Positive root of |q + t e|^2 = 1 for |q| < 1.
inline double unit_sphere_exit(const Vec3& q, const Vec3& e) {
  const double a = e.squaredNorm();
  const double b = q.dot(e);
  const double c = q.squaredNorm() - 1.0;
  const double disc = std::sqrt(std::max(0.0, b * b - a * c));
  return (b > 0.0) ? -c / (b + disc) : (disc - b) / a;
}

}  // namespace detail

inline ConvexBody ConvexBody::ball(const Vec3& center, double radius) {
  if (!(radius > 0.0)) throw ValidationError("ball radius must be positive");
  const double inv2 = 1.0 / (radius * radius);
  Options opt;
  opt.shape = BallShape{center, radius};
  opt.min_curvature_radius = radius;
  opt.volume = 4.0 * pi * radius * radius * radius / 3.0;
  opt.ray = [center, radius](const Vec3& o, const Vec3& d) {
    return radius * detail::unit_sphere_exit((o - center) / radius, d / radius);
  };
  opt.support = [center, radius](const Vec3& n) -> Vec3 { return center + radius * n.normalized(); };
  return ConvexBody([center, inv2](const Vec3& x) { return (x - center).squaredNorm() * inv2 - 1.0; },
                    [center, inv2](const Vec3& x) -> Vec3 { return 2.0 * inv2 * (x - center); }, center, radius,
                    std::move(opt));
}

inline ConvexBody ConvexBody::ellipsoid(const Vec3& center, const Vec3& semi_axes) {
  if (!(semi_axes.minCoeff() > 0.0)) throw ValidationError("ellipsoid semi-axes must be positive");
  const Vec3 inv = semi_axes.cwiseInverse();
  const Vec3 inv2 = inv.cwiseProduct(inv);
  Options opt;
  opt.shape = EllipsoidShape{center, semi_axes};
  // Smallest principal radius of curvature: (min axis)^2 / (max axis).
  opt.min_curvature_radius = semi_axes.minCoeff() * semi_axes.minCoeff() / semi_axes.maxCoeff();
  opt.volume = 4.0 * pi * semi_axes.prod() / 3.0;
  opt.ray = [center, inv](const Vec3& o, const Vec3& d) {
    return detail::unit_sphere_exit((o - center).cwiseProduct(inv), d.cwiseProduct(inv));
  };
  opt.support = [center, semi_axes](const Vec3& n) -> Vec3 {
    const Vec3 sn = semi_axes.cwiseProduct(n);
    return center + semi_axes.cwiseProduct(sn) / sn.norm();
  };
  return ConvexBody(
      [center, inv2](const Vec3& x) {
        const Vec3 d = x - center;
        return d.cwiseProduct(d).dot(inv2) - 1.0;
      },
      [center, inv2](const Vec3& x) -> Vec3 { return 2.0 * (x - center).cwiseProduct(inv2); }, center,
      semi_axes.maxCoeff(), std::move(opt));
}

inline ConvexBody ConvexBody::superquadric(const Vec3& center, const Vec3& semi_axes, const Vec3& exponents) {
  if (!(semi_axes.minCoeff() > 0.0)) throw ValidationError("superquadric semi-axes must be positive");
  if (!(exponents.minCoeff() >= 2.0)) throw ValidationError("superquadric exponents must be >= 2 for smoothness");
  Options opt;
  opt.shape = SuperquadricShape{center, semi_axes, exponents};
  auto f = [center, semi_axes, exponents](const Vec3& x) {
    double s = -1.0;
    for (int i = 0; i < 3; ++i) s += std::pow(std::abs((x[i] - center[i]) / semi_axes[i]), exponents[i]);
    return s;
  };
  auto g = [center, semi_axes, exponents](const Vec3& x) -> Vec3 {
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
      const double u = (x[i] - center[i]) / semi_axes[i];
      out[i] = exponents[i] * std::pow(std::abs(u), exponents[i] - 1.0) * (u < 0 ? -1.0 : 1.0) / semi_axes[i];
    }
    return out;
  };
  // Support point from the Lagrange condition n_i a_i = lambda p_i |y_i|^(p_i - 1);
  // the constraint sum |y_i|^p_i = 1 is monotone in lambda.
  opt.support = [center, semi_axes, exponents](const Vec3& n) -> Vec3 {
    auto point = [&](double log_lambda) {
      Vec3 y;
      for (int i = 0; i < 3; ++i) {
        const double m = std::abs(n[i]) * semi_axes[i] / exponents[i];
        y[i] = (m == 0.0) ? 0.0 : std::exp((std::log(m) - log_lambda) / (exponents[i] - 1.0));
      }
      return y;
    };
    auto excess = [&](double log_lambda) {
      const Vec3 y = point(log_lambda);
      double s = -1.0;
      for (int i = 0; i < 3; ++i) s += std::pow(y[i], exponents[i]);
      return s;
    };
    double lo = -60.0, hi = 60.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    const Vec3 y = point(0.5 * (lo + hi));
    Vec3 x = center;
    for (int i = 0; i < 3; ++i) x[i] += (n[i] < 0.0 ? -1.0 : 1.0) * semi_axes[i] * y[i];
    return x;
  };
  return ConvexBody(f, g, center, semi_axes.norm(), std::move(opt));
}

/// Distance from an interior `origin` to the boundary along unit `dir`.
/// Newton from the outer end of the bracket [0, 2R]: for convex F the
/// iterates decrease monotonically onto the root; bisection guards it.
inline double ray_boundary_distance(const ConvexBody& body, const Vec3& origin, const Vec3& dir) {
  const double f0 = body.value(origin);
  if (!(f0 < 0.0)) throw ValidationError("ray_boundary_distance: origin is not interior");
  if (body.ray_caster()) return body.ray_caster()(origin, dir);

  const double t_hi = 2.0 * body.bounding_radius();
  double lo = 0.0, hi = t_hi;
  double fhi = body.value(origin + hi * dir);
  if (!(fhi > 0.0)) throw ValidationError("ray_boundary_distance: no boundary crossing within 2 * bounding radius");
  double t = hi, f = fhi;
  for (int it = 0; it < 200; ++it) {
    const double slope = body.gradient(origin + t * dir).dot(dir);
    double tn = (slope > 0.0) ? t - f / slope : 0.5 * (lo + hi);
    if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
    const double fn = body.value(origin + tn * dir);
    const double step = std::abs(tn - t);
    t = tn;
    f = fn;
    if (fn > 0.0) {
      hi = tn;
    } else if (fn < 0.0) {
      lo = tn;
    } else {
      return tn;
    }
    if (step <= 4e-16 * t || hi - lo <= 4e-16 * hi) break;
  }
  const double scale = std::max(1e-300, body.gradient(origin + t * dir).norm() * body.bounding_radius());
  if (std::abs(f) > 1e-10 * scale) throw NumericError("ray_boundary_distance: root finder did not converge");
  return t;
}

/// Plane through `p` with unit normal `n`; (x1, x2, n) right-handed.
struct SectionPlane {
  Vec3 n = Vec3::UnitZ();
  Vec3 p = Vec3::Zero();
  Vec3 x1 = Vec3::UnitX();
  Vec3 x2 = Vec3::UnitY();

  static SectionPlane through(const Vec3& point, const Vec3& normal) {
    SectionPlane pl;
    pl.n = normal.normalized();
    pl.p = point;
    pl.x1 = any_orthogonal(pl.n);
    pl.x2 = pl.n.cross(pl.x1);
    return pl;
  }
  static SectionPlane with_basis(const Vec3& point, const Vec3& normal, const Vec3& x1, const Vec3& x2) {
    SectionPlane pl{normal, point, x1, x2};
    if ((Mat3() << x1, x2, normal).finished().transpose().isUnitary(1e-10) == false ||
        x1.cross(x2).dot(normal) < 0.0) {
      throw ValidationError("section plane basis is not right-handed orthonormal");
    }
    return pl;
  }

  Vec2 local(const Vec3& x) const { return {(x - p).dot(x1), (x - p).dot(x2)}; }
  Vec3 global(const Vec2& uv) const { return p + uv[0] * x1 + uv[1] * x2; }
};

/// One planar cross-section described in polar form about a pole.
/// Moments follow the (u, v) = (x1, x2) convention: Iu = int v^2,
/// Iv = int u^2, Iuv = int u v, all about centroidal axes.
struct SectionProfile {
  SectionPlane plane;
  bool empty = true;
  Vec3 pole = Vec3::Zero();
  Vec2 pole_local = Vec2::Zero();
  std::vector<double> phi;
  std::vector<double> r;
  std::vector<Vec2> boundary;  // (u, v) boundary samples relative to plane.p
  double area = 0.0;
  Vec3 centroid = Vec3::Zero();
  Vec2 local_centroid = Vec2::Zero();
  double Iu = 0.0, Iv = 0.0, Iuv = 0.0;
  double perimeter = 0.0;
  Vec2 boundary_line_centroid = Vec2::Zero();
  bool has_perimeter = false;
};

/// Builds all profile quantities from equispaced radii r(phi_k) about a pole
/// at plane coordinates `pole_local`; trapezoidal rule in phi.
inline SectionProfile profile_from_polar(const SectionPlane& plane, const Vec2& pole_local, std::vector<double> r,
                                         bool with_perimeter = true) {
  const std::size_t m = r.size();
  if (m < 16 || m % 2 != 0) throw ValidationError("polar profile needs an even sample count >= 16");
  SectionProfile out;
  out.plane = plane;
  out.pole_local = pole_local;
  out.pole = plane.global(pole_local);
  out.phi.resize(m);
  out.boundary.resize(m);
  const double dphi = 2.0 * pi / static_cast<double>(m);
  double a = 0.0, sx = 0.0, sy = 0.0, jxx = 0.0, jyy = 0.0, jxy = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double ph = dphi * static_cast<double>(k);
    const double c = std::cos(ph), s = std::sin(ph);
    const double r2 = r[k] * r[k], r3 = r2 * r[k], r4 = r2 * r2;
    out.phi[k] = ph;
    out.boundary[k] = pole_local + r[k] * Vec2(c, s);
    a += r2 / 2.0;
    sx += r3 * c / 3.0;
    sy += r3 * s / 3.0;
    jxx += r4 * c * c / 4.0;
    jyy += r4 * s * s / 4.0;
    jxy += r4 * c * s / 4.0;
  }
  a *= dphi;
  sx *= dphi;
  sy *= dphi;
  jxx *= dphi;
  jyy *= dphi;
  jxy *= dphi;
  out.r = std::move(r);
  out.area = a;
  out.empty = !(a > 0.0);
  if (out.empty) return out;
  const Vec2 c_rel(sx / a, sy / a);
  out.local_centroid = pole_local + c_rel;
  out.centroid = plane.global(out.local_centroid);
  out.Iv = jxx - a * c_rel[0] * c_rel[0];
  out.Iu = jyy - a * c_rel[1] * c_rel[1];
  out.Iuv = jxy - a * c_rel[0] * c_rel[1];
  if (with_perimeter) {
    const auto dr = quad::periodic_derivative(out.r);
    double len = 0.0;
    Vec2 moment = Vec2::Zero();
    for (std::size_t k = 0; k < m; ++k) {
      const double ds = std::sqrt(out.r[k] * out.r[k] + dr[k] * dr[k]);
      len += ds;
      moment += ds * out.boundary[k];
    }
    out.perimeter = len * dphi;
    out.boundary_line_centroid = moment / len;
    out.has_perimeter = true;
  }
  return out;
}

namespace detail {

// Minimiser of the convex function g on [0, t_max] by golden-section search.
template <class G>
double golden_min(G&& g, double t_max, int iters = 60) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.0, b = t_max;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double gc = g(c), gd = g(d);
  for (int i = 0; i < iters; ++i) {
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + phi * (b - a);
      gd = g(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// An interior point of the body on the plane, or nothing when the section
/// is empty or tangent. Starts at the projection of the interior hint; if
/// that is outside, probes 32 in-plane directions and then descends F.
inline std::optional<Vec3> find_pole(const ConvexBody& body, const SectionPlane& plane) {
  const Vec3 q = body.interior_hint() - (body.interior_hint() - plane.p).dot(plane.n) * plane.n;
  if (body.value(q) < 0.0) return q;
  const double reach = 2.0 * body.bounding_radius() + (q - body.interior_hint()).norm();
  Vec3 best = q;
  double fbest = body.value(q);
  for (int k = 0; k < defaults::pole_probe_directions; ++k) {
    const double a = 2.0 * pi * k / defaults::pole_probe_directions;
    const Vec3 d = std::cos(a) * plane.x1 + std::sin(a) * plane.x2;
    const double t = detail::golden_min([&](double s) { return body.value(q + s * d); }, reach);
    const Vec3 x = q + t * d;
    const double fx = body.value(x);
    if (fx < fbest) {
      fbest = fx;
      best = x;
    }
    if (fx < 0.0) return x;
  }
  // Steepest descent of F restricted to the plane, exact line searches.
  for (int it = 0; it < 60 && !(fbest < 0.0); ++it) {
    Vec3 g = body.gradient(best);
    g -= g.dot(plane.n) * plane.n;
    const double gn = g.norm();
    if (gn == 0.0) break;
    const Vec3 d = -g / gn;
    const double t = detail::golden_min([&](double s) { return body.value(best + s * d); }, reach);
    const Vec3 x = best + t * d;
    const double fx = body.value(x);
    if (!(fx < fbest)) break;
    best = x;
    fbest = fx;
  }
  if (fbest < 0.0) return best;
  return std::nullopt;
}

struct SectionOptions {
  int samples = defaults::section_samples;
  bool with_perimeter = true;
  /// Use this interior point of the plane as the pole instead of searching.
  std::optional<Vec3> pole;
  /// Never move the pole, even when it sits close to the section boundary.
  bool keep_pole = false;
};

/// Perpendicular cross-section of the body with the plane.
inline SectionProfile cross_section(const ConvexBody& body, const SectionPlane& plane, const SectionOptions& opt = {}) {
  const int m = opt.samples;
  if (m < 16 || m % 2 != 0) throw ValidationError("cross_section: sample count must be even and >= 16");
  std::optional<Vec3> pole;
  if (opt.pole && body.value(*opt.pole) < 0.0) {
    pole = *opt.pole - (*opt.pole - plane.p).dot(plane.n) * plane.n;
    if (!(body.value(*pole) < 0.0)) pole = find_pole(body, plane);
  } else {
    pole = find_pole(body, plane);
  }
  if (!pole) {
    SectionProfile empty;
    empty.plane = plane;
    return empty;
  }
  auto radii = [&](const Vec3& o) {
    std::vector<double> r(m);
    for (int k = 0; k < m; ++k) {
      const double a = 2.0 * pi * k / m;
      r[k] = ray_boundary_distance(body, o, std::cos(a) * plane.x1 + std::sin(a) * plane.x2);
    }
    return r;
  };
  std::vector<double> r = radii(*pole);
  const auto [rmin, rmax] = std::minmax_element(r.begin(), r.end());
  if (!opt.keep_pole && *rmin < 0.1 * *rmax) {
    // Pole close to the section boundary: recentre once at the centroid.
    const SectionProfile first = profile_from_polar(plane, plane.local(*pole), r, false);
    if (!first.empty && body.value(first.centroid) < 0.0) {
      pole = first.centroid;
      r = radii(*pole);
    }
  }
  return profile_from_polar(plane, plane.local(*pole), std::move(r), opt.with_perimeter);
}

/// A maximiser of <x, n> over the body: analytic when available, otherwise
/// bisection on the level of the last non-empty plane section.
inline Vec3 support_point(const ConvexBody& body, const Vec3& n_in) {
  const Vec3 n = n_in.normalized();
  if (body.support_function()) return body.support_function()(n);
  const double z0 = body.interior_hint().dot(n);
  double lo = z0, hi = z0 + 2.0 * body.bounding_radius();
  Vec3 best = body.interior_hint();
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const SectionPlane pl = SectionPlane::through(body.interior_hint() + (mid - z0) * n, n);
    if (const auto pole = find_pole(body, pl)) {
      lo = mid;
      best = *pole;
    } else {
      hi = mid;
    }
  }
  return best;
}

inline double support_value(const ConvexBody& body, const Vec3& n) { return support_point(body, n).dot(n.normalized()); }

struct HalfspaceOptions {
  quad::AdaptiveOptions quad{defaults::halfspace_rel_tol, 0.0, 8, 2000};
  int samples = defaults::section_samples;
};

/// Volume of {x in K : <x - p, n> <= 0} by adaptive quadrature of slice
/// areas perpendicular to n.
inline double halfspace_volume(const ConvexBody& body, const Vec3& n_in, const Vec3& p,
                               const HalfspaceOptions& opt = {}) {
  if (std::abs(n_in.norm() - 1.0) > 1e-9) throw ValidationError("halfspace_volume: normal must be a unit vector");
  const Vec3 n = n_in.normalized();
  const Vec3 x_top = support_point(body, n), x_bot = support_point(body, -n);
  const double zmax = x_top.dot(n), zmin = x_bot.dot(n);
  const double zp = p.dot(n);
  if (zp <= zmin) return 0.0;
  const double upper = std::min(zp, zmax);
  // Poles on the chord between the two support points.
  const Vec3 chord = x_top - x_bot;
  auto area = [&](double z) {
    SectionOptions so;
    so.samples = opt.samples;
    so.with_perimeter = false;
    so.pole = x_bot + ((z - zmin) / (zmax - zmin)) * chord;
    const SectionPlane pl = SectionPlane::through(*so.pole, n);
    return cross_section(body, pl, so).area;
  };
  const quad::QuadResult res = quad::integrate_adaptive(area, zmin, upper, opt.quad);
  if (!res.converged) {
    std::ostringstream msg;
    msg << "halfspace_volume: quadrature did not converge (estimate " << res.value << ", error " << res.error << ")";
    throw NumericError(msg.str());
  }
  return res.value;
}

/// Volume cut off from the unit ball by the tangent plane of the concentric
/// sphere of radius r.
inline double cap_volume_ball(double r) {
  if (!(r > 0.0 && r < 1.0)) throw ValidationError("cap_volume_ball: r must lie in (0, 1)");
  return pi / 3.0 * (1.0 - r) * (1.0 - r) * (2.0 + r);
}

struct MonteCarloResult {
  double volume = 0.0;
  double std_error = 0.0;
  Vec3 centroid = Vec3::Zero();
  Vec3 centroid_std_error = Vec3::Zero();
  std::uint64_t accepted = 0;
  std::uint64_t samples = 0;
};

/// Rejection sampling in the box [lo, hi]. Sample i draws its coordinates
/// from counters 3i..3i+2 of a counter-based generator, so any split into
/// chunks (and threads) reproduces the same estimate for a fixed seed.
template <class Pred>
MonteCarloResult monte_carlo_volume(Pred&& inside, const Vec3& lo, const Vec3& hi, std::uint64_t seed,
                                    std::uint64_t samples, unsigned threads = 0) {
  if (samples == 0) throw ValidationError("monte_carlo_volume: sample count must be positive");
  const Vec3 ext = hi - lo;
  constexpr std::uint64_t chunk = 1u << 16;
  const std::uint64_t nchunks = (samples + chunk - 1) / chunk;
  struct Partial {
    std::uint64_t count = 0;
    Vec3 sum = Vec3::Zero();
    Vec3 sum2 = Vec3::Zero();
  };
  std::vector<Partial> parts(nchunks);
  auto run = [&](std::uint64_t c0, std::uint64_t c1) {
    for (std::uint64_t c = c0; c < c1; ++c) {
      Partial p;
      const std::uint64_t end = std::min(samples, (c + 1) * chunk);
      for (std::uint64_t i = c * chunk; i < end; ++i) {
        const Vec3 x(lo[0] + ext[0] * rng::uniform(seed, 3 * i), lo[1] + ext[1] * rng::uniform(seed, 3 * i + 1),
                     lo[2] + ext[2] * rng::uniform(seed, 3 * i + 2));
        if (inside(x)) {
          ++p.count;
          p.sum += x;
          p.sum2 += x.cwiseProduct(x);
        }
      }
      parts[c] = p;
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, nchunks));
  if (threads <= 1) {
    run(0, nchunks);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t per = (nchunks + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::uint64_t c0 = t * per, c1 = std::min(nchunks, c0 + per);
      if (c0 < c1) pool.emplace_back(run, c0, c1);
    }
    for (auto& th : pool) th.join();
  }
  Partial tot;
  for (const auto& p : parts) {
    tot.count += p.count;
    tot.sum += p.sum;
    tot.sum2 += p.sum2;
  }
  MonteCarloResult out;
  out.samples = samples;
  out.accepted = tot.count;
  const double box = ext.prod();
  const double phat = static_cast<double>(tot.count) / static_cast<double>(samples);
  out.volume = box * phat;
  out.std_error = box * std::sqrt(phat * (1.0 - phat) / static_cast<double>(samples));
  if (tot.count > 1) {
    const double nacc = static_cast<double>(tot.count);
    out.centroid = tot.sum / nacc;
    const Vec3 var = (tot.sum2 / nacc - out.centroid.cwiseProduct(out.centroid)) * (nacc / (nacc - 1.0));
    out.centroid_std_error = (var.cwiseMax(0.0) / nacc).cwiseSqrt();
  }
  return out;
}

inline MonteCarloResult monte_carlo_volume(const ConvexBody& body, std::uint64_t seed, std::uint64_t samples,
                                           unsigned threads = 0) {
  const Vec3 r = Vec3::Constant(body.bounding_radius());
  return monte_carlo_volume([&](const Vec3& x) { return body.contains(x); }, body.interior_hint() - r,
                            body.interior_hint() + r, seed, samples, threads);
}

/// Random-pair midpoint test of convexity; throws when a midpoint of two
/// boundary points lies outside (F > tol).
inline void validate_convexity(const ConvexBody& body, int pairs = 100, std::uint64_t seed = 7, double tol = 1e-9) {
  auto boundary_point = [&](std::uint64_t k) {
    Vec3 d;
    do {
      d = Vec3(2.0 * rng::uniform(seed, 3 * k) - 1.0, 2.0 * rng::uniform(seed, 3 * k + 1) - 1.0,
               2.0 * rng::uniform(seed, 3 * k + 2) - 1.0);
      k += 1000003;
    } while (d.norm() < 1e-3 || d.norm() > 1.0);
    d.normalize();
    return Vec3(body.interior_hint() + ray_boundary_distance(body, body.interior_hint(), d) * d);
  };
  for (int i = 0; i < pairs; ++i) {
    const Vec3 a = boundary_point(2 * i), b = boundary_point(2 * i + 1);
    if (body.value(0.5 * (a + b)) > tol) throw ValidationError("body failed the convexity spot check");
  }
}

}  // namespace pappus
