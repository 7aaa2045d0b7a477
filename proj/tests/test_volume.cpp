// SPDX-License-Identifier: Apache-2.0
// Copyright 2026, the pappus authors
#include "fixtures.hpp"

#include <pappus/volume.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace pappus;
using fixtures::disk_tube;
using fixtures::ellipse_tube;

namespace {

SliceSeries torus_series(double R, double r, double R_curve) {
  // Same torus, described from a concentric circle of radius R_curve.
  const Ribbon circle = Ribbon::arc(Vec3::Zero(), R_curve, 2 * pi);
  const Vec2 offset(R_curve - R, 0.0);
  return slice_series(circle, [&](const RibbonSample& smp) { return disk_section(smp, offset, r); });
}

}  // namespace

TEST(CheckDiffeo, TorusMargin) {
  const auto rep = check_diffeo(torus_series(1.0, 0.3, 1.0));
  EXPECT_TRUE(rep.ok);
  EXPECT_NEAR(rep.margin, 0.7, 1e-14);
}

TEST(CheckDiffeo, StraightRibbonMarginIsOne) {
  const Ribbon line = Ribbon::line(Vec3::Zero(), Vec3::UnitZ(), Vec3::UnitX(), 2.0);
  const auto series = slice_series(line, [](const RibbonSample& smp) { return disk_section(smp, Vec2::Zero(), 0.5); });
  const auto rep = check_diffeo(series);
  EXPECT_TRUE(rep.ok);
  EXPECT_EQ(rep.margin, 1.0);
}

TEST(CheckDiffeo, FatTubeFails) {
  const auto series = torus_series(1.0, 1.1, 1.0);
  const auto rep = check_diffeo(series);
  EXPECT_FALSE(rep.ok);
  EXPECT_NEAR(rep.margin, -0.1, 1e-14);
  try {
    pappus_volume(series);
    FAIL() << "expected DiffeoError";
  } catch (const DiffeoError& e) {
    EXPECT_NEAR(e.report().margin, -0.1, 1e-14);
    EXPECT_NE(std::string(e.what()).find("Jacobian condition"), std::string::npos);
  }
}

TEST(PappusVolume, TorusFromCentroidCircle) {
  EXPECT_NEAR(pappus_volume(torus_series(1.0, 0.3, 1.0)), 2 * pi * pi * 0.09, 1e-12);
}

TEST(PappusVolume, TorusFromOffsetCircleNeedsCorrection) {
  const auto series = torus_series(1.0, 0.3, 1.2);
  EXPECT_NEAR(series.nodes.front().u_bar(), 0.2, 1e-14);
  EXPECT_NEAR(pappus_volume(series), 2 * pi * pi * 0.09, 1e-12);
  // Without the determinant correction the answer would be wrong by 20%.
  double naive = 0.0;
  for (const auto& n : series.nodes) naive += n.weight * n.profile.area;
  EXPECT_NEAR(naive / (2 * pi * pi * 0.09), 1.2, 1e-12);
}

TEST(PappusVolume, BallAlongDiameter) {
  const auto ball = ConvexBody::ball(Vec3::Zero(), 1.0);
  const Ribbon diameter = Ribbon::line(Vec3(0, 0, -1), Vec3::UnitZ(), Vec3::UnitX(), 2.0);
  EXPECT_NEAR(pappus_volume(slice_body(ball, diameter)), 4 * pi / 3, 1e-12);
}

TEST(PappusVolume, SectionPlanesAreNormalToTangent) {
  const auto series = torus_series(1.0, 0.3, 1.0);
  for (const auto& n : series.nodes) EXPECT_LT((n.profile.plane.n - n.at.frame.T).norm(), 1e-10);
}

TEST(PappusVolume, ClassicPartialRevolution) {
  const double R = 2.0, alpha = 1.3, a = 0.3, b = 0.2;
  const Vec2 c(0.1, 0.05);
  const Ribbon arc = Ribbon::arc(Vec3(1, 2, 3), R, alpha);
  const auto series = slice_series(arc, [&](const RibbonSample& smp) { return ellipse_section(smp, c, a, b, 0.4); });
  const double expect = pi * a * b * alpha * (R - c[0]);
  EXPECT_NEAR(pappus_volume(series), expect, 1e-8 * expect);
}

TEST(PappusIntegrand, SliceDisplacementInvariance) {
  const auto series = torus_series(1.0, 0.3, 1.1);
  for (const auto& node : series.nodes) {
    const Curvatures c{node.at.curv.kappa_n, 0.37, 0.2};
    const double base = pappus_integrand(node.profile.area, node.u_bar(), node.v_bar(), c);
    for (double t : {0.01, 0.1}) {
      const double moved =
          pappus_integrand(node.profile.area, node.u_bar() + t * c.kappa_g, node.v_bar() + t * c.kappa_n, c);
      EXPECT_NEAR(moved, base, 1e-12);
    }
  }
}

TEST(CentroidCurveVolume, BallAndEllipsoid) {
  const auto ball = ConvexBody::ball(Vec3::Zero(), 1.0);
  EXPECT_NEAR(axis_volume(ball, Vec3::UnitZ(), Vec3::Zero()), 4 * pi / 3, 1e-12);
  const auto ell = ConvexBody::ellipsoid(Vec3::Zero(), Vec3(1, 0.625, 0.5));
  const double v = axis_volume(ell, Vec3::UnitX(), Vec3::Zero());
  EXPECT_NEAR(v, 4 * pi * 0.3125 / 3, 1e-8 * v);
  EXPECT_NEAR(v, 1.30900, 1e-5);
}

TEST(CentroidCurveVolume, RotatingEllipsesMatchDisks) {
  const Ribbon circle = Ribbon::arc(Vec3::Zero(), 1.0, 2 * pi);
  auto rho = [](double s) { return 0.25 + 0.1 * std::sin(4 * s); };
  const double disks = centroid_curve_volume(circle, [&](double s) { return pi * rho(s) * rho(s); });
  const auto ellipses = ellipse_tube(
      circle, [&](double s) { return 1.5 * rho(s); }, [&](double s) { return rho(s) / 1.5; },
      [](double s) { return 3 * s; }, 0.53);
  const auto series = ellipses.series();
  const double via_sections = centroid_curve_volume(circle, [&](double s) {
    return ellipse_section(circle.sample(s), Vec2::Zero(), 1.5 * rho(s), rho(s) / 1.5, 3 * s).area;
  });
  EXPECT_NEAR(disks, via_sections, 1e-10 * disks);
  EXPECT_NEAR(pappus_volume(series), disks, 1e-10 * disks);
}

TEST(CentroidCurveVolume, DiskTorusAgreesWithMonteCarlo) {
  const Ribbon circle = Ribbon::arc(Vec3::Zero(), 1.0, 2 * pi);
  auto rho = [](double s) { return 0.25 + 0.1 * std::sin(4 * s); };
  const auto solid = disk_tube(circle, rho, 0.35);
  const double vol = centroid_curve_volume(circle, [&](double s) { return pi * rho(s) * rho(s); });
  const auto mc = fixtures::monte_carlo(solid, 5, 1'000'000);
  EXPECT_LT(std::abs(mc.volume - vol), 4 * mc.std_error);
}

TEST(BodyCentroid, StraightRodIsMidpoint) {
  const Ribbon line = Ribbon::line(Vec3(1, 1, 1), Vec3(1, 2, 0).normalized(), Vec3::UnitZ(), 3.0);
  const auto series = slice_series(line, [](const RibbonSample& smp) {
    return ellipse_section(smp, Vec2::Zero(), 0.2, 0.1, 0.3);
  });
  const auto bc = body_centroid_along_ribbon(series);
  EXPECT_LT((bc.centroid - line.point(1.5)).norm(), 1e-13);
}

TEST(BodyCentroid, FullTorusIsCircleCentre) {
  const Vec3 centre(0.5, -1, 2);
  const Ribbon circle = Ribbon::arc(centre, 1.0, 2 * pi);
  const auto series = slice_series(circle, [](const RibbonSample& smp) { return disk_section(smp, Vec2::Zero(), 0.3); });
  const auto bc = body_centroid_along_ribbon(series, true);
  EXPECT_LT((bc.centroid - centre).norm(), 1e-12);
  EXPECT_FALSE(bc.cross_terms);
}

TEST(BodyCentroid, QuarterTubeMatchesMonteCarlo) {
  const Ribbon quarter = Ribbon::arc(Vec3::Zero(), 1.0, pi / 2);
  const auto solid = disk_tube(quarter, [](double) { return 0.2; }, 0.2);
  const auto bc = body_centroid_along_ribbon(solid.series());
  EXPECT_NEAR(bc.volume, pi * 0.04 * pi / 2, 1e-12);
  const auto mc = fixtures::monte_carlo(solid, 17, 1'000'000);
  for (int i = 0; i < 3; ++i) EXPECT_LT(std::abs(mc.centroid[i] - bc.centroid[i]), 4 * mc.centroid_std_error[i]) << i;
}

TEST(BodyCentroid, RotatedEllipsesUseCrossTerms) {
  const Ribbon quarter = Ribbon::arc(Vec3::Zero(), 1.0, pi / 2);
  const auto solid = ellipse_tube(
      quarter, [](double) { return 0.25; }, [](double) { return 0.1; }, [](double) { return 0.6; }, 0.25);
  const auto series = solid.series();
  EXPECT_THROW(body_centroid_along_ribbon(series, true), ValidationError);
  const auto bc = body_centroid_along_ribbon(series);
  EXPECT_TRUE(bc.cross_terms);
  const auto mc = fixtures::monte_carlo(solid, 23, 1'000'000);
  for (int i = 0; i < 3; ++i) EXPECT_LT(std::abs(mc.centroid[i] - bc.centroid[i]), 4 * mc.centroid_std_error[i]) << i;
}

TEST(BodyCentroid, RejectsNonCentroidRibbon) {
  EXPECT_THROW(body_centroid_along_ribbon(torus_series(1.0, 0.3, 1.2)), ValidationError);
}

TEST(PappusVolume, RandomBentTubesAgreeWithMonteCarlo) {
  for (std::uint64_t k = 0; k < 3; ++k) {
    const double R = 0.8 + 0.8 * rng::uniform(101, 5 * k);
    const double alpha = 0.5 + 2.5 * rng::uniform(101, 5 * k + 1);
    const double w = 1.0 + 3.0 * rng::uniform(101, 5 * k + 2);
    const double off = 0.1 * (rng::uniform(101, 5 * k + 3) - 0.5);
    const Ribbon arc = Ribbon::arc(Vec3::Zero(), R, alpha);
    // Off-centre ellipses whose size and orientation vary along the arc.
    const auto solid = ellipse_tube(
        arc, [&](double s) { return 0.2 + 0.05 * std::sin(w * s); }, [](double) { return 0.12; },
        [&](double s) { return w * s; }, 0.3, [off](double s) { return Vec2(off, 0.03 * std::cos(s)); });
    const auto series = solid.series();
    ASSERT_TRUE(check_diffeo(series).ok);
    const double vol = pappus_volume(series);
    const auto mc = fixtures::monte_carlo(solid, 200 + k, 1'000'000);
    EXPECT_LT(std::abs(mc.volume - vol), 4 * mc.std_error) << "tube " << k;
  }
}

TEST(SliceCsv, RoundTrip) {
  const auto rows = slice_rows(torus_series(1.0, 0.3, 1.2));
  std::stringstream ss;
  write_slice_csv(ss, rows);
  EXPECT_EQ(read_slice_csv(ss), rows);
}
