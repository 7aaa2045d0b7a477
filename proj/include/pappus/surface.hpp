// SPDX-License-Identifier: Apache-2.0
// Copyright 2026, the pappus authors
#pragma once

#include <pappus/body.hpp>
#include <pappus/csv.hpp>
#include <pappus/frames.hpp>
#include <pappus/quadrature.hpp>
#include <pappus/volume.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

namespace pappus {

/// Lateral surface of a tube, p(s, t) = gamma(s) + u(s,t) N(s) + v(s,t) B(s),
/// sampled on an s grid and an equispaced periodic t grid over [0, period).
/// End caps are not part of the surface.
struct BoundaryTrace {
  Ribbon ribbon;
  std::vector<double> s;
  std::vector<double> s_weights;  // quadrature weights in s; empty means trapezoid
  double period = 2.0 * pi;
  int t_count = 0;
  Eigen::MatrixXd u;  // s.size() x t_count
  Eigen::MatrixXd v;

  double t(int j) const { return period * j / t_count; }
  std::vector<double> t_grid() const {
    std::vector<double> out(t_count);
    for (int j = 0; j < t_count; ++j) out[j] = t(j);
    return out;
  }
};

/// Generator of a tube surface: boundary(s, t) in ribbon coordinates,
/// periodic in t with the given period.
struct TubeSurface {
  Ribbon ribbon;
  std::function<Vec2(double, double)> boundary;
  double period = 2.0 * pi;
};

inline BoundaryTrace sample_boundary_trace(const TubeSurface& surf, int s_panels = 64, int s_order = 4,
                                           int t_count = defaults::section_samples) {
  const quad::NodeSet ns = quad::composite_gauss(surf.ribbon.s_begin(), surf.ribbon.s_end(), s_panels, s_order);
  BoundaryTrace tr{surf.ribbon, ns.x, ns.w, surf.period, t_count, {}, {}};
  tr.u.resize(static_cast<Eigen::Index>(ns.x.size()), t_count);
  tr.v.resize(tr.u.rows(), t_count);
  for (Eigen::Index i = 0; i < tr.u.rows(); ++i) {
    for (int j = 0; j < t_count; ++j) {
      const Vec2 uv = surf.boundary(tr.s[i], tr.t(j));
      tr.u(i, j) = uv[0];
      tr.v(i, j) = uv[1];
    }
  }
  return tr;
}

/// Boundary of the normal sections of a convex body along a ribbon, with
/// t the polar angle about each section's pole.
inline BoundaryTrace boundary_trace_from_body(const ConvexBody& body, const Ribbon& ribbon, int s_panels = 64,
                                              int s_order = 4, int t_count = defaults::section_samples) {
  const quad::NodeSet ns = quad::composite_gauss(ribbon.s_begin(), ribbon.s_end(), s_panels, s_order);
  BoundaryTrace tr{ribbon, ns.x, ns.w, 2.0 * pi, t_count, {}, {}};
  tr.u.resize(static_cast<Eigen::Index>(ns.x.size()), t_count);
  tr.v.resize(tr.u.rows(), t_count);
  for (Eigen::Index i = 0; i < tr.u.rows(); ++i) {
    const RibbonSample smp = ribbon.sample(tr.s[i]);
    SectionOptions so;
    so.samples = t_count;
    so.with_perimeter = false;
    if (body.contains(smp.gamma)) so.pole = smp.gamma;
    const SectionProfile prof = cross_section(body, ribbon_plane(smp), so);
    if (prof.empty) {
      std::ostringstream msg;
      msg << "boundary trace: empty section at s=" << tr.s[i];
      throw ValidationError(msg.str());
    }
    for (int j = 0; j < t_count; ++j) {
      tr.u(i, j) = prof.boundary[j][0];
      tr.v(i, j) = prof.boundary[j][1];
    }
  }
  return tr;
}

struct LineStats {
  double L = 0.0;
  double u_bar = 0.0;  // arc-length weighted, not the area centroid
  double v_bar = 0.0;
};

namespace detail {

inline std::vector<double> row_of(const Eigen::MatrixXd& m, Eigen::Index i) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) out[j] = m(i, j);
  return out;
}

}  // namespace detail

inline LineStats boundary_line_stats(const BoundaryTrace& tr, std::size_t i) {
  const auto u = detail::row_of(tr.u, static_cast<Eigen::Index>(i));
  const auto v = detail::row_of(tr.v, static_cast<Eigen::Index>(i));
  const auto ut = quad::periodic_derivative(u, tr.period);
  const auto vt = quad::periodic_derivative(v, tr.period);
  double len = 0.0, mu = 0.0, mv = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double sp = std::hypot(ut[j], vt[j]);
    len += sp;
    mu += u[j] * sp;
    mv += v[j] * sp;
  }
  LineStats st;
  st.L = len * tr.period / static_cast<double>(u.size());
  if (!(st.L >= 1e-12)) {
    std::ostringstream msg;
    msg << "boundary curve at s=" << tr.s[i] << " is degenerate (length " << st.L << ")";
    throw ValidationError(msg.str());
  }
  st.u_bar = mu / len;
  st.v_bar = mv / len;
  return st;
}

/// Quadrature weights in s: the stored ones, or the trapezoid rule.
inline std::vector<double> s_weights(const BoundaryTrace& tr) {
  if (!tr.s_weights.empty()) return tr.s_weights;
  const std::size_t n = tr.s.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = tr.s[i + 1] - tr.s[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

/// Structural checks: grid shapes, s increasing, each section curve simple
/// at sample resolution.
inline void validate_trace(const BoundaryTrace& tr) {
  const auto ns = static_cast<Eigen::Index>(tr.s.size());
  if (ns < 2) throw ValidationError("boundary trace needs at least two s values");
  if (tr.t_count < 16 || tr.t_count % 2 != 0) throw ValidationError("boundary trace needs an even t count >= 16");
  if (tr.u.rows() != ns || tr.v.rows() != ns || tr.u.cols() != tr.t_count || tr.v.cols() != tr.t_count) {
    throw ValidationError("boundary trace grid shape mismatch");
  }
  if (!tr.s_weights.empty() && tr.s_weights.size() != tr.s.size()) {
    throw ValidationError("boundary trace weights do not match the s grid");
  }
  for (Eigen::Index i = 1; i < ns; ++i) {
    if (!(tr.s[i] > tr.s[i - 1])) throw ValidationError("boundary trace s values must increase");
  }
  for (Eigen::Index i = 0; i < ns; ++i) {
    std::vector<Vec2> poly(tr.t_count);
    for (int j = 0; j < tr.t_count; ++j) poly[j] = Vec2(tr.u(i, j), tr.v(i, j));
    // Sweep-free check: compare each edge with the non-adjacent ones.
    const std::size_t m = poly.size();
    for (std::size_t a = 0; a < m; ++a) {
      const Vec2 &p1 = poly[a], &p2 = poly[(a + 1) % m];
      const Vec2 lo = p1.cwiseMin(p2), hi = p1.cwiseMax(p2);
      for (std::size_t b = a + 2; b < m; ++b) {
        if (a == 0 && b == m - 1) continue;
        const Vec2 &q1 = poly[b], &q2 = poly[(b + 1) % m];
        if (q1.cwiseMax(q2)[0] < lo[0] || q1.cwiseMin(q2)[0] > hi[0] || q1.cwiseMax(q2)[1] < lo[1] ||
            q1.cwiseMin(q2)[1] > hi[1]) {
          continue;
        }
        const double d1 = (q2 - q1).x() * (p1 - q1).y() - (q2 - q1).y() * (p1 - q1).x();
        const double d2 = (q2 - q1).x() * (p2 - q1).y() - (q2 - q1).y() * (p2 - q1).x();
        const double d3 = (p2 - p1).x() * (q1 - p1).y() - (p2 - p1).y() * (q1 - p1).x();
        const double d4 = (p2 - p1).x() * (q2 - p1).y() - (p2 - p1).y() * (q2 - p1).x();
        if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0) {
          std::ostringstream msg;
          msg << "boundary curve at s=" << tr.s[i] << " self-intersects";
          throw ValidationError(msg.str());
        }
      }
    }
  }
}

/// 1 - u kn + v kg over every grid point; the worst one is reported.
inline DiffeoReport check_trace_diffeo(const BoundaryTrace& tr) {
  DiffeoReport rep;
  for (std::size_t i = 0; i < tr.s.size(); ++i) {
    const Curvatures c = tr.ribbon.curvatures(tr.s[i]);
    for (int j = 0; j < tr.t_count; ++j) {
      const double m = 1.0 - tr.u(i, j) * c.kappa_n + tr.v(i, j) * c.kappa_g;
      if (m < rep.margin) {
        rep.margin = m;
        rep.s = tr.s[i];
        rep.u = tr.u(i, j);
        rep.v = tr.v(i, j);
      }
    }
  }
  rep.ok = rep.margin > 0.0;
  return rep;
}

/// Lower bound of the lateral area: int L(s) (1 - (u_L kn - v_L kg)) ds with
/// the line centroid (u_L, v_L) of each boundary curve.
inline double area_lower_bound(const BoundaryTrace& tr) {
  validate_trace(tr);
  const DiffeoReport rep = check_trace_diffeo(tr);
  if (!rep.ok) throw DiffeoError(rep);
  const auto w = s_weights(tr);
  double total = 0.0;
  for (std::size_t i = 0; i < tr.s.size(); ++i) {
    const LineStats st = boundary_line_stats(tr, i);
    const Curvatures c = tr.ribbon.curvatures(tr.s[i]);
    total += w[i] * st.L * (1.0 - (st.u_bar * c.kappa_n - st.v_bar * c.kappa_g));
  }
  return total;
}

/// Largest |(u_s - tau_g v) v_t - (v_s + tau_g u) u_t| over the grid, divided
/// by the largest t-speed of the same section curve. Zero exactly when the
/// lower bound is attained. s-derivatives use 5-point finite differences.
inline double equality_defect(const BoundaryTrace& tr) {
  const std::size_t ns = tr.s.size();
  const std::size_t width = std::min<std::size_t>(5, ns);
  double worst = 0.0;
  for (std::size_t i = 0; i < ns; ++i) {
    const std::size_t k0 = quad::stencil_start(i, ns, width);
    const std::span<const double> xs(tr.s.data() + k0, width);
    const auto wd = quad::fd_weights(tr.s[i], xs, 1);
    const auto u = detail::row_of(tr.u, static_cast<Eigen::Index>(i));
    const auto v = detail::row_of(tr.v, static_cast<Eigen::Index>(i));
    const auto ut = quad::periodic_derivative(u, tr.period);
    const auto vt = quad::periodic_derivative(v, tr.period);
    const double tau = tr.ribbon.curvatures(tr.s[i]).tau_g;
    double speed = 0.0;
    for (int j = 0; j < tr.t_count; ++j) speed = std::max(speed, std::hypot(ut[j], vt[j]));
    if (!(speed > 0.0)) continue;
    for (int j = 0; j < tr.t_count; ++j) {
      double us = 0.0, vs = 0.0;
      for (std::size_t k = 0; k < width; ++k) {
        us += wd[k] * tr.u(static_cast<Eigen::Index>(k0 + k), j);
        vs += wd[k] * tr.v(static_cast<Eigen::Index>(k0 + k), j);
      }
      const double e = (us - tau * v[j]) * vt[j] - (vs + tau * u[j]) * ut[j];
      worst = std::max(worst, std::abs(e) / speed);
    }
  }
  return worst;
}

/// Area of the triangulated surface on a uniform (s, t) grid: every bilinear
/// quad is split into two triangles.
inline double mesh_area(const TubeSurface& surf, int s_count, int t_count) {
  if (s_count < 2 || t_count < 3) throw ValidationError("mesh needs at least 2 x 3 grid points");
  const double ds = surf.ribbon.length() / (s_count - 1);
  std::vector<Vec3> prev(t_count), cur(t_count);
  auto fill = [&](int i, std::vector<Vec3>& row) {
    const RibbonSample smp = surf.ribbon.sample(surf.ribbon.s_begin() + i * ds);
    for (int j = 0; j < t_count; ++j) {
      const Vec2 uv = surf.boundary(smp.s, surf.period * j / t_count);
      row[j] = smp.gamma + uv[0] * smp.frame.N + uv[1] * smp.frame.B;
    }
  };
  fill(0, prev);
  double area = 0.0;
  for (int i = 1; i < s_count; ++i) {
    fill(i, cur);
    for (int j = 0; j < t_count; ++j) {
      const int jn = (j + 1) % t_count;
      const Vec3 &a = prev[j], &b = prev[jn], &c = cur[jn], &d = cur[j];
      area += 0.5 * (b - a).cross(c - a).norm() + 0.5 * (c - a).cross(d - a).norm();
    }
    std::swap(prev, cur);
  }
  return area;
}

struct MeshArea {
  double area = 0.0;         // Richardson-extrapolated
  double finest = 0.0;       // raw area on the finest mesh
  double rel_estimate = 0.0; // |extrapolated - finest| / extrapolated
  int s_count = 0;
  int t_count = 0;
  bool converged = false;
};

/// Mesh area refined by doubling both grids until the second-order
/// Richardson estimate falls below `rel_tol`.
inline MeshArea refined_mesh_area(const TubeSurface& surf, double rel_tol = 1e-6, int s0 = 32, int t0 = 32,
                                  int max_levels = 7) {
  MeshArea out;
  int ns = s0, nt = t0;
  double coarse = mesh_area(surf, ns, nt);
  for (int level = 0; level < max_levels; ++level) {
    ns = 2 * (ns - 1) + 1;
    nt *= 2;
    const double fine = mesh_area(surf, ns, nt);
    out.finest = fine;
    out.area = fine + (fine - coarse) / 3.0;
    out.rel_estimate = std::abs(out.area - fine) / std::abs(out.area);
    out.s_count = ns;
    out.t_count = nt;
    if (out.rel_estimate < rel_tol) {
      out.converged = true;
      break;
    }
    coarse = fine;
  }
  return out;
}

/// Grid export: one row per (s, t) with the s-quadrature weight.
inline void write_trace_grid_csv(std::ostream& os, const BoundaryTrace& tr) {
  const auto w = s_weights(tr);
  os << "# period=" << csv::format(tr.period) << '\n';
  csv::write_header(os, {"s", "t", "u", "v", "w_s"});
  for (std::size_t i = 0; i < tr.s.size(); ++i) {
    for (int j = 0; j < tr.t_count; ++j) {
      csv::write_row(os, {tr.s[i], tr.t(j), tr.u(i, j), tr.v(i, j), w[i]});
    }
  }
}

/// Reads an (s, t, u, v[, w_s]) grid. Rows are grouped by s in file order;
/// t must be the same equispaced grid for every s. Without a period comment
/// the period is t-count times the t spacing.
inline BoundaryTrace read_trace_grid_csv(std::istream& is, const Ribbon& ribbon) {
  const csv::Table tab = csv::read(is);
  const std::size_t cs = tab.column("s"), ct = tab.column("t"), cu = tab.column("u"), cv = tab.column("v");
  const bool has_w = std::find(tab.header.begin(), tab.header.end(), "w_s") != tab.header.end();
  const std::size_t cw = has_w ? tab.column("w_s") : 0;
  std::vector<double> s, w;
  std::vector<std::vector<double>> t, u, v;
  for (const auto& row : tab.rows) {
    if (s.empty() || row[cs] != s.back()) {
      s.push_back(row[cs]);
      if (has_w) w.push_back(row[cw]);
      t.emplace_back();
      u.emplace_back();
      v.emplace_back();
    }
    t.back().push_back(row[ct]);
    u.back().push_back(row[cu]);
    v.back().push_back(row[cv]);
  }
  if (s.empty()) throw ValidationError("trace grid: no rows");
  const std::size_t m = t.front().size();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (t[i].size() != m) throw ValidationError("trace grid: every s needs the same number of t values");
    for (std::size_t j = 0; j < m; ++j) {
      if (t[i][j] != t[0][j]) throw ValidationError("trace grid: t values differ between s rows");
    }
  }
  double period = m > 1 ? (t[0][1] - t[0][0]) * static_cast<double>(m) : 0.0;
  for (const auto& c : tab.comments) {
    if (c.rfind("period=", 0) == 0) period = csv::parse_double(std::string_view(c).substr(7));
  }
  BoundaryTrace tr{ribbon, s, w, period, static_cast<int>(m), {}, {}};
  tr.u.resize(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(m));
  tr.v.resize(tr.u.rows(), tr.u.cols());
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      tr.u(i, j) = u[i][j];
      tr.v(i, j) = v[i][j];
    }
  }
  validate_trace(tr);
  return tr;
}

}  // namespace pappus
