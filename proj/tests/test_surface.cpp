// SPDX-License-Identifier: Apache-2.0
// Copyright 2026, the pappus authors
#include <pappus/random.hpp>
#include <pappus/surface.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace pappus;

namespace {

TubeSurface circle_tube(Ribbon rib, double r, Vec2 centre = Vec2::Zero()) {
  return {std::move(rib), [=](double, double t) -> Vec2 { return centre + r * Vec2(std::cos(t), std::sin(t)); }};
}

/// Ellipse with semi-axes (a, b) turned by theta(s) in the (N, B) plane.
TubeSurface rotating_ellipse(Ribbon rib, double a, double b, std::function<double(double)> theta) {
  return {std::move(rib), [=](double s, double t) {
            const double th = theta(s), c = std::cos(th), sn = std::sin(th);
            const Vec2 q(a * std::cos(t), b * std::sin(t));
            return Vec2(c * q[0] - sn * q[1], sn * q[0] + c * q[1]);
          }};
}

BoundaryTrace single_curve(std::function<Vec2(double)> curve, int m = 256) {
  const Ribbon line = Ribbon::line(Vec3::Zero(), Vec3::UnitZ(), Vec3::UnitX(), 1.0);
  return sample_boundary_trace({line, [=](double, double t) -> Vec2 { return curve(t); }}, 1, 2, m);
}

}  // namespace

TEST(LineStats, CircleAtOrigin) {
  const auto tr = single_curve([](double t) -> Vec2 { return 0.7 * Vec2(std::cos(t), std::sin(t)); });
  const LineStats st = boundary_line_stats(tr, 0);
  EXPECT_NEAR(st.L, 2 * pi * 0.7, 1e-13);
  EXPECT_NEAR(st.u_bar, 0.0, 1e-15);
  EXPECT_NEAR(st.v_bar, 0.0, 1e-15);
}

TEST(LineStats, TranslatedCircle) {
  const auto tr = single_curve([](double t) -> Vec2 { return Vec2(0.4, 0.0) + 0.7 * Vec2(std::cos(t), std::sin(t)); });
  const LineStats st = boundary_line_stats(tr, 0);
  EXPECT_NEAR(st.L, 2 * pi * 0.7, 1e-13);
  EXPECT_NEAR(st.u_bar, 0.4, 1e-14);
  EXPECT_NEAR(st.v_bar, 0.0, 1e-15);
}

TEST(LineStats, EllipsePerimeter) {
  const auto tr = single_curve([](double t) { return Vec2(2 * std::cos(t), std::sin(t)); });
  const auto ref = quad::integrate_adaptive([](double t) { return std::hypot(2 * std::sin(t), std::cos(t)); }, 0.0,
                                            2 * pi, {1e-15, 0.0, 8, 500});
  const LineStats st = boundary_line_stats(tr, 0);
  EXPECT_NEAR(st.L, ref.value, 1e-12);
  EXPECT_NEAR(st.L, 9.688448, 1e-6);
  EXPECT_NEAR(st.u_bar, 0.0, 1e-14);
}

TEST(LineStats, DegenerateCurveRejected) {
  const auto tr = single_curve([](double) { return Vec2(0.1, 0.2); });
  EXPECT_THROW(boundary_line_stats(tr, 0), ValidationError);
}

TEST(AreaLowerBound, CylinderIsExact) {
  const auto surf = circle_tube(Ribbon::line(Vec3(1, 2, 3), Vec3(1, 1, 0), Vec3::UnitZ(), 2.5), 0.4);
  const auto tr = sample_boundary_trace(surf);
  EXPECT_NEAR(area_lower_bound(tr), 2 * pi * 0.4 * 2.5, 1e-13);
  EXPECT_LT(equality_defect(tr), 1e-10);
}

TEST(AreaLowerBound, TorusEquality) {
  const double R = 1.0, r = 0.3;
  const auto surf = circle_tube(Ribbon::arc(Vec3::Zero(), R, 2 * pi), r);
  const auto tr = sample_boundary_trace(surf);
  const double bound = area_lower_bound(tr);
  EXPECT_NEAR(bound, 4 * pi * pi * R * r, 1e-8);
  EXPECT_NEAR(bound, 11.8435, 1e-4);
  EXPECT_LT(equality_defect(tr), 1e-8);
  const MeshArea mesh = refined_mesh_area(surf);
  ASSERT_TRUE(mesh.converged);
  EXPECT_LT(std::abs(bound - mesh.area) / mesh.area, 1e-5);
}

TEST(AreaLowerBound, OffsetCirclesOnArcEquality) {
  // A torus described from a concentric circle: the line centroid sits off
  // the ribbon, the sections still do not change along s.
  const auto surf = circle_tube(Ribbon::arc(Vec3::Zero(), 1.2, 2 * pi), 0.3, Vec2(0.2, 0.0));
  const auto tr = sample_boundary_trace(surf);
  EXPECT_NEAR(area_lower_bound(tr), 4 * pi * pi * 0.3, 1e-8);
  EXPECT_LT(equality_defect(tr), 1e-8);
}

TEST(AreaLowerBound, RandomTubesStayBelowMeshArea) {
  std::uint64_t counter = 0;
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * rng::uniform(2024, counter++); };
  for (int trial = 0; trial < 3; ++trial) {
    const Ribbon rib = trial == 1 ? Ribbon::helix(Vec3::Zero(), uni(0.8, 1.2), uni(0.1, 0.4), uni(2.0, 4.0))
                                  : Ribbon::arc(Vec3::Zero(), uni(0.8, 1.5), uni(1.0, 4.0));
    const double a0 = uni(0.1, 0.25), b0 = uni(0.05, 0.15), k = uni(0.5, 2.0), w = uni(-1.0, 1.0);
    const double cu = uni(-0.1, 0.1), cv = uni(-0.1, 0.1);
    const TubeSurface surf{rib, [=](double s, double t) {
                             const double a = a0 * (1.0 + 0.3 * std::sin(k * s)), b = b0 * (1.0 + 0.2 * std::cos(s));
                             const double th = w * s, c = std::cos(th), sn = std::sin(th);
                             const Vec2 q(a * std::cos(t), b * std::sin(t));
                             return Vec2(cu * std::sin(s) + c * q[0] - sn * q[1], cv * s + sn * q[0] + c * q[1]);
                           }};
    const double bound = area_lower_bound(sample_boundary_trace(surf));
    const MeshArea mesh = refined_mesh_area(surf);
    ASSERT_TRUE(mesh.converged) << trial;
    EXPECT_LE(bound, mesh.area * (1.0 + 1e-6)) << trial;
    EXPECT_GT(bound, 0.5 * mesh.area) << trial;
  }
}

TEST(EqualityDefect, RotatingEllipseOnLine) {
  const Ribbon line = Ribbon::line(Vec3::Zero(), Vec3::UnitZ(), Vec3::UnitX(), 2.0);
  double prev = -1.0;
  for (double omega : {0.0, 0.1, 0.25, 0.5, 1.0}) {
    const auto surf = rotating_ellipse(line, 0.3, 0.15, [=](double s) { return omega * s; });
    const double d = equality_defect(sample_boundary_trace(surf));
    if (omega == 0.0) {
      EXPECT_LT(d, 1e-12);
    } else {
      EXPECT_GT(d, prev) << omega;
    }
    prev = d;
  }
  const auto surf = rotating_ellipse(line, 0.3, 0.15, [](double s) { return 0.5 * s; });
  const auto tr = sample_boundary_trace(surf);
  EXPECT_GT(equality_defect(tr), 1e-3);
  EXPECT_LT(area_lower_bound(tr), refined_mesh_area(surf).area * (1.0 - 1e-4));
}

TEST(EqualityDefect, HelixSectionsCounterRotating) {
  // Sections that turn against the geodesic torsion keep a fixed orientation
  // in a parallel frame: the bound is attained.
  const Ribbon helix = Ribbon::helix(Vec3::Zero(), 1.0, 0.3, 3.0);
  const double tau = helix.curvatures(0.0).tau_g;
  const auto surf = rotating_ellipse(helix, 0.25, 0.1, [=](double s) { return -tau * s; });
  const auto tr = sample_boundary_trace(surf, 128, 4);
  EXPECT_LT(equality_defect(tr), 1e-8);
  const MeshArea mesh = refined_mesh_area(surf);
  ASSERT_TRUE(mesh.converged);
  EXPECT_LT(std::abs(area_lower_bound(tr) - mesh.area) / mesh.area, 1e-5);
  const auto twisted = sample_boundary_trace(rotating_ellipse(helix, 0.25, 0.1, [](double) { return 0.0; }));
  EXPECT_GT(equality_defect(twisted), 1e-3);
}

TEST(AreaLowerBound, JacobianViolationRejected) {
  const auto surf = circle_tube(Ribbon::arc(Vec3::Zero(), 1.0, pi), 1.2);
  EXPECT_THROW(area_lower_bound(sample_boundary_trace(surf)), DiffeoError);
}

TEST(BoundaryTrace, SelfIntersectingSectionRejected) {
  const auto tr = single_curve([](double t) { return Vec2(std::sin(t), std::sin(2 * t)); });
  EXPECT_THROW(validate_trace(tr), ValidationError);
}

TEST(BoundaryTrace, MatchesBodySections) {
  const ConvexBody body = ConvexBody::ellipsoid(Vec3::Zero(), Vec3(1.0, 0.625, 0.5));
  const Ribbon line = Ribbon::line(Vec3(-0.9, 0.05, -0.02), Vec3(1, 0.1, 0.05), Vec3::UnitY(), 1.7);
  const BoundaryTrace tr = boundary_trace_from_body(body, line, 8, 4);
  for (std::size_t i = 0; i < tr.s.size(); i += 5) {
    const RibbonSample smp = line.sample(tr.s[i]);
    SectionOptions so;
    so.pole = smp.gamma;
    const SectionProfile prof = cross_section(body, ribbon_plane(smp), so);
    const LineStats st = boundary_line_stats(tr, i);
    EXPECT_NEAR(st.L, prof.perimeter, 1e-8 * prof.perimeter);
    const double scale = std::sqrt(prof.area);
    EXPECT_NEAR(st.u_bar, prof.boundary_line_centroid[0], 1e-8 * scale);
    EXPECT_NEAR(st.v_bar, prof.boundary_line_centroid[1], 1e-8 * scale);
  }
}

TEST(BoundaryTrace, BallZoneAlongDiameter) {
  // Circles of radius sqrt(1 - s^2) change along s, so the bound is strict.
  const ConvexBody ball = ConvexBody::ball(Vec3::Zero(), 1.0);
  const Ribbon diameter = Ribbon::line(Vec3(0, 0, -0.9), Vec3::UnitZ(), Vec3::UnitX(), 1.8);
  const double bound = area_lower_bound(boundary_trace_from_body(ball, diameter, 32, 4));
  const double exact = 2 * pi * (0.9 * std::sqrt(0.19) + std::asin(0.9));
  EXPECT_NEAR(bound, exact, 1e-8 * exact);
  EXPECT_LT(bound, 2 * pi * 1.8);
}

TEST(TraceGridCsv, RoundTrip) {
  const auto surf = rotating_ellipse(Ribbon::arc(Vec3::Zero(), 1.0, 2.0), 0.2, 0.1, [](double s) { return s; });
  const auto tr = sample_boundary_trace(surf, 8, 4, 32);
  std::stringstream ss;
  write_trace_grid_csv(ss, tr);
  const BoundaryTrace back = read_trace_grid_csv(ss, tr.ribbon);
  ASSERT_EQ(back.s.size(), tr.s.size());
  EXPECT_EQ(back.t_count, tr.t_count);
  EXPECT_EQ(back.period, tr.period);
  EXPECT_EQ(back.s, tr.s);
  EXPECT_EQ(back.s_weights, tr.s_weights);
  EXPECT_TRUE(back.u == tr.u);
  EXPECT_TRUE(back.v == tr.v);
  EXPECT_EQ(area_lower_bound(back), area_lower_bound(tr));
}

TEST(TraceGridCsv, TrapezoidWithoutWeights) {
  std::stringstream ss;
  ss << "s,t,u,v\n";
  for (int i = 0; i <= 10; ++i) {
    for (int j = 0; j < 16; ++j) {
      const double t = 2 * pi * j / 16;
      ss << 0.1 * i << ',' << csv::format(t) << ',' << csv::format(0.5 * std::cos(t)) << ','
         << csv::format(0.5 * std::sin(t)) << '\n';
    }
  }
  const Ribbon line = Ribbon::line(Vec3::Zero(), Vec3::UnitZ(), Vec3::UnitX(), 1.0);
  const BoundaryTrace tr = read_trace_grid_csv(ss, line);
  EXPECT_TRUE(tr.s_weights.empty());
  EXPECT_NEAR(tr.period, 2 * pi, 1e-15);
  EXPECT_NEAR(area_lower_bound(tr), pi, 1e-12);
}
