// SPDX-License-Identifier: Apache-2.0
// Copyright 2026, the pappus authors
#pragma once

#include <pappus/body.hpp>
#include <pappus/csv.hpp>
#include <pappus/defaults.hpp>
#include <pappus/frames.hpp>
#include <pappus/quadrature.hpp>

#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

namespace pappus {

/// Plane through gamma(s) perpendicular to T(s) with in-plane axes (N, B),
/// so plane coordinates are the ribbon coordinates (u, v).
inline SectionPlane ribbon_plane(const RibbonSample& smp) {
  return SectionPlane{smp.frame.T, smp.gamma, smp.frame.N, smp.frame.B};
}

/// Star-shaped section about `center` (ribbon coordinates) with boundary
/// radius(phi), phi measured from N towards B.
inline SectionProfile polar_section(const RibbonSample& smp, const Vec2& center,
                                    const std::function<double(double)>& radius,
                                    int samples = defaults::section_samples, bool with_perimeter = true) {
  std::vector<double> r(samples);
  for (int k = 0; k < samples; ++k) r[k] = radius(2.0 * pi * k / samples);
  return profile_from_polar(ribbon_plane(smp), center, std::move(r), with_perimeter);
}

inline SectionProfile disk_section(const RibbonSample& smp, const Vec2& center, double radius,
                                   int samples = defaults::section_samples) {
  if (!(radius > 0.0)) throw ValidationError("disk section radius must be positive");
  return polar_section(smp, center, [radius](double) { return radius; }, samples);
}

/// Ellipse with semi-axes (a, b), the a-axis rotated by `theta` from N.
inline SectionProfile ellipse_section(const RibbonSample& smp, const Vec2& center, double a, double b, double theta,
                                      int samples = defaults::section_samples) {
  if (!(a > 0.0 && b > 0.0)) throw ValidationError("ellipse section semi-axes must be positive");
  return polar_section(
      smp, center,
      [=](double phi) {
        const double c = std::cos(phi - theta) / a, s = std::sin(phi - theta) / b;
        return 1.0 / std::sqrt(c * c + s * s);
      },
      samples);
}

using SectionFn = std::function<SectionProfile(const RibbonSample&)>;

struct SliceNode {
  RibbonSample at;
  double weight = 0.0;
  SectionProfile profile;

  double u_bar() const { return profile.local_centroid[0]; }
  double v_bar() const { return profile.local_centroid[1]; }
};

/// Cross-sections Gamma(s) at the nodes of a composite Gauss-Legendre rule
/// over the ribbon, in ascending s.
struct SliceSeries {
  double s_begin = 0.0;
  double s_end = 0.0;
  std::vector<SliceNode> nodes;
};

struct SliceOptions {
  int panels = defaults::s_panels;
  int order = defaults::s_order;
};

inline SliceSeries slice_series(const Ribbon& ribbon, const SectionFn& section, const SliceOptions& opt = {}) {
  const quad::NodeSet ns = quad::composite_gauss(ribbon.s_begin(), ribbon.s_end(), opt.panels, opt.order);
  SliceSeries out;
  out.s_begin = ribbon.s_begin();
  out.s_end = ribbon.s_end();
  out.nodes.reserve(ns.x.size());
  for (std::size_t i = 0; i < ns.x.size(); ++i) {
    SliceNode node;
    node.at = ribbon.sample(ns.x[i]);
    node.weight = ns.w[i];
    node.profile = section(node.at);
    out.nodes.push_back(std::move(node));
  }
  return out;
}

/// Sections of a convex body by the normal planes of a ribbon.
inline SliceSeries slice_body(const ConvexBody& body, const Ribbon& ribbon, const SliceOptions& opt = {},
                              int samples = defaults::section_samples) {
  return slice_series(
      ribbon,
      [&](const RibbonSample& smp) {
        SectionOptions so;
        so.samples = samples;
        if (body.contains(smp.gamma)) so.pole = smp.gamma;
        return cross_section(body, ribbon_plane(smp), so);
      },
      opt);
}

/// Worst value of the Jacobian 1 - u kn + v kg over all boundary samples.
struct DiffeoReport {
  bool ok = true;
  double margin = std::numeric_limits<double>::infinity();
  double s = 0.0;
  double u = 0.0;
  double v = 0.0;

  std::string message() const {
    std::ostringstream msg;
    msg << "Jacobian condition 1 - u*kn + v*kg > 0 violated at s=" << s << ", (u, v)=(" << u << ", " << v
        << "): margin " << margin;
    return msg.str();
  }
};

class DiffeoError : public ValidationError {
 public:
  explicit DiffeoError(const DiffeoReport& r) : ValidationError(r.message()), report_(r) {}
  const DiffeoReport& report() const { return report_; }

 private:
  DiffeoReport report_;
};

/// Pointwise check only; global injectivity of the sweep is not verified.
inline DiffeoReport check_diffeo(const SliceSeries& series) {
  DiffeoReport rep;
  for (const auto& node : series.nodes) {
    if (node.profile.empty) continue;
    const Curvatures& c = node.at.curv;
    for (const Vec2& uv : node.profile.boundary) {
      const double m = 1.0 - uv[0] * c.kappa_n + uv[1] * c.kappa_g;
      if (m < rep.margin) {
        rep.margin = m;
        rep.s = node.at.s;
        rep.u = uv[0];
        rep.v = uv[1];
      }
    }
  }
  rep.ok = rep.margin > 0.0;
  return rep;
}

/// A(s) (1 - (u_bar kn - v_bar kg)).
inline double pappus_integrand(double area, double u_bar, double v_bar, const Curvatures& c) {
  return area * (1.0 - (u_bar * c.kappa_n - v_bar * c.kappa_g));
}

inline double pappus_integrand(const SliceNode& node) {
  return pappus_integrand(node.profile.area, node.u_bar(), node.v_bar(), node.at.curv);
}

inline double pappus_volume(const SliceSeries& series) {
  const DiffeoReport rep = check_diffeo(series);
  if (!rep.ok) throw DiffeoError(rep);
  double vol = 0.0;
  for (const auto& node : series.nodes) vol += node.weight * pappus_integrand(node);
  return vol;
}

/// Volume from the section areas along a centroid curve: int A(s) ds.
inline double centroid_curve_volume(const Ribbon& ribbon, const std::function<double(double)>& area,
                                    const quad::AdaptiveOptions& opt = {defaults::centroid_line_rel_tol, 0.0, 8,
                                                                        4000}) {
  const quad::QuadResult res = quad::integrate_adaptive(area, ribbon.s_begin(), ribbon.s_end(), opt);
  if (!res.converged) {
    std::ostringstream msg;
    msg << "centroid_curve_volume: quadrature did not converge (estimate " << res.value << ", error " << res.error
        << ")";
    throw NumericError(msg.str());
  }
  return res.value;
}

/// Straight ribbon through `through` along `axis`, spanning the body.
inline Ribbon body_axis_ribbon(const ConvexBody& body, const Vec3& axis_in, const Vec3& through) {
  const Vec3 axis = axis_in.normalized();
  const Vec3 base = through - through.dot(axis) * axis;
  const double zmax = support_value(body, axis), zmin = -support_value(body, -axis);
  return Ribbon::line(base + zmin * axis, axis, any_orthogonal(axis), zmax - zmin);
}

/// Volume by slicing along a straight line: int A(s) ds with exact section areas.
inline double axis_volume(const ConvexBody& body, const Vec3& axis, const Vec3& through,
                          int samples = defaults::section_samples) {
  const Ribbon line = body_axis_ribbon(body, axis, through);
  return centroid_curve_volume(line, [&](double s) {
    const RibbonSample smp = line.sample(s);
    SectionOptions so;
    so.samples = samples;
    so.with_perimeter = false;
    if (body.contains(smp.gamma)) so.pole = smp.gamma;
    return cross_section(body, ribbon_plane(smp), so).area;
  });
}

struct BodyCentroid {
  Vec3 centroid = Vec3::Zero();
  double volume = 0.0;
  bool cross_terms = false;  // some section had a non-negligible product moment
};

/// Body centroid from sections along a centroid curve:
///   c = (1/vol) int A gamma - Iv kn N + Iu kg B + Iuv (kg N - kn B) ds.
/// With `assume_symmetric`, every section must have Iuv ~ 0.
inline BodyCentroid body_centroid_along_ribbon(const SliceSeries& series, bool assume_symmetric = false) {
  for (const auto& node : series.nodes) {
    const double tol = 1e-6 * std::sqrt(std::max(node.profile.area, 0.0));
    if (std::abs(node.u_bar()) > tol || std::abs(node.v_bar()) > tol) {
      std::ostringstream msg;
      msg << "section centroid off the ribbon at s=" << node.at.s << " (u_bar=" << node.u_bar()
          << ", v_bar=" << node.v_bar() << "): the ribbon is not a centroid curve";
      throw ValidationError(msg.str());
    }
  }
  const DiffeoReport rep = check_diffeo(series);
  if (!rep.ok) throw DiffeoError(rep);
  BodyCentroid out;
  Vec3 moment = Vec3::Zero();
  for (const auto& node : series.nodes) {
    const SectionProfile& p = node.profile;
    const Curvatures& c = node.at.curv;
    const Frame& f = node.at.frame;
    if (std::abs(p.Iuv) > 1e-6 * (p.Iu + p.Iv)) {
      if (assume_symmetric) {
        std::ostringstream msg;
        msg << "section at s=" << node.at.s << " is not symmetric: Iuv=" << p.Iuv;
        throw ValidationError(msg.str());
      }
      out.cross_terms = true;
    }
    out.volume += node.weight * p.area;
    moment += node.weight * (p.area * node.at.gamma - p.Iv * c.kappa_n * f.N + p.Iu * c.kappa_g * f.B +
                             p.Iuv * (c.kappa_g * f.N - c.kappa_n * f.B));
  }
  out.centroid = moment / out.volume;
  return out;
}

/// Solid swept by planar sections along a ribbon, with a membership test
/// for Monte-Carlo oracles.
struct SweptSolid {
  Ribbon ribbon;
  SectionFn section;
  std::function<bool(double, const Vec2&)> inside;  // (s, (u, v))
  double max_extent = 0.0;                           // bound on |(u, v)| over all sections

  SliceSeries series(const SliceOptions& opt = {}) const { return slice_series(ribbon, section, opt); }

  std::pair<Vec3, Vec3> bounding_box(int samples = 1024) const {
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity()), hi = -lo;
    const double ds = ribbon.length() / (samples - 1);
    for (int i = 0; i < samples; ++i) {
      const Vec3 g = ribbon.point(ribbon.s_begin() + i * ds);
      lo = lo.cwiseMin(g);
      hi = hi.cwiseMax(g);
    }
    // Sampling gap of the curve itself is at most ds / 2.
    const double pad = max_extent + ds;
    return {lo - Vec3::Constant(pad), hi + Vec3::Constant(pad)};
  }

  /// Locates the normal planes through x (closed form for lines and arcs,
  /// bracketing of <x - gamma, T> otherwise) and tests the section.
  bool contains(const Vec3& x) const {
    if (const auto* a = ribbon.analytic()) {
      if (const auto* arc = std::get_if<Ribbon::Arc>(a)) {
        const Vec3 q = arc->basis.transpose() * (x - arc->center);
        double th = std::atan2(q[1], q[0]);
        if (th < 0.0) th += 2.0 * pi;
        const double s = arc->radius * th;
        if (s > ribbon.s_end()) return false;
        return inside(s, Vec2(arc->radius - std::hypot(q[0], q[1]), q[2]));
      }
      if (const auto* line = std::get_if<Ribbon::Line>(a)) {
        const Vec3 d = x - line->origin;
        const double s = d.dot(line->frame.T);
        if (s < ribbon.s_begin() || s > ribbon.s_end()) return false;
        return inside(s, Vec2(d.dot(line->frame.N), d.dot(line->frame.B)));
      }
    }
    constexpr int grid = 256;
    const double ds = ribbon.length() / grid;
    auto g = [&](double s) {
      const RibbonSample smp = ribbon.sample(s);
      return (x - smp.gamma).dot(smp.frame.T);
    };
    double s_prev = ribbon.s_begin(), g_prev = g(s_prev);
    for (int i = 1; i <= grid; ++i) {
      const double s_cur = ribbon.s_begin() + i * ds;
      const double g_cur = g(s_cur);
      if ((g_prev <= 0.0) != (g_cur <= 0.0)) {
        double lo = s_prev, hi = s_cur, glo = g_prev;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double gm = g(mid);
          if ((gm <= 0.0) == (glo <= 0.0)) {
            lo = mid;
            glo = gm;
          } else {
            hi = mid;
          }
        }
        const RibbonSample smp = ribbon.sample(0.5 * (lo + hi));
        const Vec3 d = x - smp.gamma;
        const Vec2 uv(d.dot(smp.frame.N), d.dot(smp.frame.B));
        if (uv.norm() <= max_extent && inside(smp.s, uv)) return true;
      }
      s_prev = s_cur;
      g_prev = g_cur;
    }
    return false;
  }
};

/// One exported row of a slice series.
struct SliceRow {
  double s, A, u_bar, v_bar, kn, kg, Iu, Iv, Iuv, L;
  bool operator==(const SliceRow&) const = default;
};

inline std::vector<SliceRow> slice_rows(const SliceSeries& series) {
  std::vector<SliceRow> rows;
  rows.reserve(series.nodes.size());
  for (const auto& n : series.nodes) {
    const auto& p = n.profile;
    rows.push_back({n.at.s, p.area, n.u_bar(), n.v_bar(), n.at.curv.kappa_n, n.at.curv.kappa_g, p.Iu, p.Iv, p.Iuv,
                    p.perimeter});
  }
  return rows;
}

inline void write_slice_csv(std::ostream& os, const std::vector<SliceRow>& rows) {
  csv::write_header(os, {"s", "A", "u_bar", "v_bar", "kn", "kg", "Iu", "Iv", "Iuv", "L"});
  for (const auto& r : rows) csv::write_row(os, {r.s, r.A, r.u_bar, r.v_bar, r.kn, r.kg, r.Iu, r.Iv, r.Iuv, r.L});
}

inline std::vector<SliceRow> read_slice_csv(std::istream& is) {
  const csv::Table t = csv::read(is);
  const std::size_t c[10] = {t.column("s"),  t.column("A"),  t.column("u_bar"), t.column("v_bar"), t.column("kn"),
                             t.column("kg"), t.column("Iu"), t.column("Iv"),    t.column("Iuv"),   t.column("L")};
  std::vector<SliceRow> rows;
  for (const auto& r : t.rows) {
    rows.push_back({r[c[0]], r[c[1]], r[c[2]], r[c[3]], r[c[4]], r[c[5]], r[c[6]], r[c[7]], r[c[8]], r[c[9]]});
  }
  return rows;
}

}  // namespace pappus
