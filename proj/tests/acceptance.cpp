// SPDX-License-Identifier: Apache-2.0
// Copyright 2026, the pappus authors
//
// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "fixtures.hpp"

#include <pappus/pappus.hpp>
#include <pappus/random.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace pappus;

namespace {

const Vec3 kAxes(1.0, 0.625, 0.5);
const Vec3 kP0(0.8, -0.3, 0.18);

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome ellipsoid_trace() {
  const auto ell = ConvexBody::ellipsoid(Vec3::Zero(), kAxes);
  // Trace up to the level of the closed-form curve at x = 0.04.
  const double x_end = 0.04;
  const Vec2 yz = ellipsoid_centroid_curve(1.0, 0.625, 0.5, kP0, x_end);
  const Vec3 pe(x_end, yz[0], yz[1]);
  const double delta_max = cut_volume(ell, ellipsoid_cut_normal(kAxes, pe), pe);

  std::vector<double> errs;
  double worst_time = 0.0;
  double reach = 0.0;  // largest end x over the runs; must pass below 0.05
  for (double h : {1e-3, 5e-4, 2.5e-4}) {
    const auto t0 = Clock::now();
    TraceOptions opt;
    opt.h = h;
    opt.delta_max = delta_max;
    opt.backward = false;
    const auto tr = trace_centroid_curve(ell, kP0, opt);
    worst_time = std::max(worst_time, seconds_since(t0));
    double err = 0.0;
    for (const auto& smp : tr.forward.samples) {
      const double x = smp.gamma.x();
      if (x < 0.05 || x > 0.8) continue;
      const Vec2 cf = ellipsoid_centroid_curve(1.0, 0.625, 0.5, kP0, x);
      err = std::max({err, std::abs(cf[0] - smp.gamma.y()), std::abs(cf[1] - smp.gamma.z())});
    }
    errs.push_back(err);
    reach = std::max(reach, tr.forward.samples.back().gamma.x());
  }
  const double ratio1 = errs[0] / errs[1], ratio2 = errs[1] / errs[2];
  const bool pass = errs[0] < 1e-4 && ratio1 >= 8.0 && worst_time < 60.0 && reach < 0.05;
  return {pass, fmt("sup err %.2e / %.2e / %.2e (h = 1e-3, 5e-4, 2.5e-4), ratios %.1f, %.1f, slowest run %.1f s",
                    errs[0], errs[1], errs[2], ratio1, ratio2, worst_time)};
}

Outcome ball_caps() {
  const auto ball = ConvexBody::ball(Vec3::Zero(), 1.0);
  double worst = 0.0;
  for (double r : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double exact = pi / 3.0 * (1.0 - r) * (1.0 - r) * (2.0 + r);
    const Vec3 e = Vec3(1.0, -2.0, 0.5).normalized();
    worst = std::max(worst, std::abs(cut_volume(ball, -e, r * e) - exact));
  }
  return {worst < 1e-8, fmt("max |V - pi/3 (1-r)^2 (2+r)| = %.2e over r in {0.1, ..., 0.9}", worst)};
}

Outcome torus_volume() {
  const double exact = 2 * pi * pi * 0.09;
  const Ribbon centroid_circle = Ribbon::arc(Vec3::Zero(), 1.0, 2 * pi);
  const double v1 = centroid_curve_volume(centroid_circle, [](double) { return pi * 0.09; });
  const Ribbon outer = Ribbon::arc(Vec3::Zero(), 1.2, 2 * pi);
  const auto series =
      slice_series(outer, [](const RibbonSample& smp) { return disk_section(smp, Vec2(0.2, 0.0), 0.3); });
  const double v2 = pappus_volume(series);
  const double e1 = std::abs(v1 - exact) / exact, e2 = std::abs(v2 - exact) / exact;
  return {e1 < 1e-8 && e2 < 1e-8,
          fmt("centroid circle rel err %.2e, offset circle (R' = 1.2) rel err %.2e", e1, e2)};
}

Outcome rotating_ellipses() {
  const Ribbon circle = Ribbon::arc(Vec3::Zero(), 1.0, 2 * pi);
  auto rho = [](double s) { return 0.25 + 0.1 * std::sin(4 * s); };
  const auto disks = fixtures::disk_tube(circle, rho, 0.35);
  const auto ellipses = fixtures::ellipse_tube(
      circle, [&](double s) { return 1.5 * rho(s); }, [&](double s) { return rho(s) / 1.5; },
      [](double s) { return 3 * s; }, 0.53);
  const double vd = pappus_volume(disks.series()), ve = pappus_volume(ellipses.series());
  const double rel = std::abs(vd - ve) / vd;
  const auto mcd = fixtures::monte_carlo(disks, 11, 10'000'000);
  const auto mce = fixtures::monte_carlo(ellipses, 13, 10'000'000);
  const double zd = std::abs(mcd.volume - vd) / mcd.std_error, ze = std::abs(mce.volume - ve) / mce.std_error;
  return {rel < 1e-8 && zd < 4.0 && ze < 4.0,
          fmt("V = %.10f, disks vs ellipses rel diff %.2e, Monte Carlo (1e7) %.2f SE / %.2f SE", vd, rel, zd, ze)};
}

struct InvariantStats {
  double min_step = 1e300;  // smallest sign * (delta_i - delta_{i-1})
  double slope = 0.0;       // max |delta' - A| / A
  double residual = 0.0;    // max |centroid - gamma| / R
  double angle = 0.0;       // max approach angle at the boundary
};

void scan_branch(const ConvexBody& body, const TraceBranch& br, double sign, InvariantStats& st) {
  const auto& v = br.samples;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) st.min_step = std::min(st.min_step, sign * (v[i].delta - v[i - 1].delta));
    if (i > 0 && i + 2 < v.size() && v[i].area > 0) {
      const double slope = (v[i + 1].delta - v[i - 1].delta) / (v[i + 1].s - v[i - 1].s);
      st.slope = std::max(st.slope, std::abs(slope - v[i].area) / v[i].area);
    }
    if (i % 10 == 0 && v[i].area > 0) {
      const auto prof = cross_section(body, SectionPlane::through(v[i].gamma, v[i].n));
      st.residual = std::max(st.residual, (prof.centroid - v[i].gamma).norm() / body.bounding_radius());
    }
  }
  if (br.stop == StopReason::reached_boundary && v.size() > 1) {
    st.angle = std::max(st.angle, boundary_approach_angle(br, body));
  }
}

Outcome trace_invariants() {
  const auto ball = ConvexBody::ball(Vec3::Zero(), 1.0);
  const auto ell = ConvexBody::ellipsoid(Vec3::Zero(), kAxes);
  InvariantStats st;
  int branches = 0, boundary_ends = 0;
  auto run = [&](const ConvexBody& body, const Vec3& p0, const TraceOptions& opt) {
    const auto tr = trace_centroid_curve(body, p0, opt);
    for (const auto* br : {&tr.forward, &tr.backward}) {
      if (br->samples.size() < 2) continue;
      ++branches;
      if (br->stop == StopReason::reached_boundary) ++boundary_ends;
      scan_branch(body, *br, br == &tr.forward ? 1.0 : -1.0, st);
    }
  };
  TraceOptions opt;
  opt.h = 0.01;
  opt.delta_min = 1e-6;
  run(ball, Vec3(0.0, 0.0, 0.5), opt);
  run(ball, Vec3(0.2, -0.3, 0.4), opt);
  opt.delta_max = 0.5;
  run(ell, Vec3(0.6, 0.0, 0.0), opt);
  opt.h = 2e-3;
  opt.delta_max = 0.55;
  run(ell, kP0, opt);
  const double x = 0.5;
  const Vec2 yz = ellipsoid_centroid_curve(1.0, 0.625, 0.5, kP0, x);
  opt.delta_max = 0.6;
  run(ell, Vec3(x, yz[0], yz[1]), opt);
  const bool pass = st.min_step > 0.0 && st.slope < 0.02 && st.residual < 1e-6 && st.angle < 0.02 && boundary_ends >= 3;
  return {pass, fmt("%d branches (%d end at the boundary): min delta step %.2e, max |delta' - A|/A %.2e, "
                    "max centroid residual %.2e R, max approach angle %.2e rad",
                    branches, boundary_ends, st.min_step, st.slope, st.residual, st.angle)};
}

Outcome quarter_rod() {
  const RodSpec rod{Ribbon::arc(Vec3::Zero(), 1.0, pi / 2), profile_moments(shape::Disk{0.1}), false};
  const RodResult res = bent_rod_centroid(rod);
  const Vec3 general = body_centroid_along_ribbon(rod_solid(rod).series({64, 8}), true).centroid;
  const double diff = (general - res.centroid).norm();
  const double vol_err = std::abs(res.volume - pi * 0.01 * pi / 2);
  const auto mc = fixtures::monte_carlo(rod_solid(rod), 7, 4'000'000);
  double z = 0.0;
  for (int i = 0; i < 2; ++i) z = std::max(z, std::abs(mc.centroid[i] - res.centroid[i]) / mc.centroid_std_error[i]);
  return {diff < 1e-8 && vol_err < 1e-12 && z < 4.0,
          fmt("centroid (%.10f, %.10f, %.1g), rod vs general formula %.2e, volume err %.2e, Monte Carlo %.2f SE",
              res.centroid[0], res.centroid[1], res.centroid[2], diff, vol_err, z)};
}

Outcome revolution_segment() {
  const std::vector<Vec2> xz{{1.0, -0.2}, {1.6, -0.1}, {1.7, 0.0}, {1.6, 0.1}, {1.0, 0.2}};
  const RawMoments raw = polygon_raw_moments(xz);
  const double r_bar = raw.su / raw.area;
  std::vector<Vec2> uv;
  for (auto it = xz.rbegin(); it != xz.rend(); ++it) uv.emplace_back(r_bar - (*it)[0], (*it)[1]);
  const Profile prof = profile_moments(shape::Polygon{uv});
  const RevolutionMoments m = revolution_moments(prof, r_bar);
  const double steiner = std::abs(m.I_z() - raw.juu) / raw.juu;
  double equiv = 0.0;
  for (double alpha : {0.3, pi / 2, 2.5, pi, 5.0, 2 * pi}) {
    const Vec3 a = revolution_segment_centroid(m, alpha);
    const Vec3 b = bent_rod_centroid(revolution_rod(prof, r_bar, alpha)).centroid;
    equiv = std::max(equiv, (a - b).norm() / r_bar);
  }
  return {prof.symmetric() && steiner < 1e-12 && equiv < 1e-10,
          fmt("Steiner rel err %.2e, segment vs rod formula %.2e r_bar over 6 angles", steiner, equiv)};
}

Outcome surface_bound() {
  auto circle = [](double r, Vec2 c) {
    return [=](double, double t) -> Vec2 { return c + r * Vec2(std::cos(t), std::sin(t)); };
  };
  const TubeSurface cyl{Ribbon::line(Vec3(1, 2, 3), Vec3(1, 1, 0).normalized(), Vec3::UnitZ(), 2.5),
                        circle(0.4, Vec2::Zero())};
  const double cyl_err = std::abs(area_lower_bound(sample_boundary_trace(cyl)) - 2 * pi * 0.4 * 2.5);
  const TubeSurface torus{Ribbon::arc(Vec3::Zero(), 1.0, 2 * pi), circle(0.3, Vec2::Zero())};
  const auto ttr = sample_boundary_trace(torus);
  const double torus_err = std::abs(area_lower_bound(ttr) - 4 * pi * pi * 0.3);
  const double defect = equality_defect(ttr);

  std::uint64_t counter = 0;
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * rng::uniform(31, counter++); };
  double worst_ratio = 0.0;
  bool converged = true;
  for (int trial = 0; trial < 3; ++trial) {
    const Ribbon rib = trial == 1 ? Ribbon::helix(Vec3::Zero(), uni(0.8, 1.2), uni(0.1, 0.4), uni(2.0, 4.0))
                                  : Ribbon::arc(Vec3::Zero(), uni(0.8, 1.5), uni(1.0, 4.0));
    const double a0 = uni(0.1, 0.25), b0 = uni(0.05, 0.15), k = uni(0.5, 2.0), w = uni(-1.0, 1.0);
    const TubeSurface surf{rib, [=](double s, double t) {
                             const double a = a0 * (1.0 + 0.3 * std::sin(k * s)), b = b0 * (1.0 + 0.2 * std::cos(s));
                             const double c = std::cos(w * s), sn = std::sin(w * s);
                             const Vec2 q(a * std::cos(t), b * std::sin(t));
                             return Vec2(c * q[0] - sn * q[1], sn * q[0] + c * q[1]);
                           }};
    const MeshArea mesh = refined_mesh_area(surf);
    converged = converged && mesh.converged;
    worst_ratio = std::max(worst_ratio, area_lower_bound(sample_boundary_trace(surf)) / mesh.area);
  }
  const bool pass =
      cyl_err < 1e-10 && torus_err < 1e-8 && defect < 1e-8 && converged && worst_ratio <= 1.0 + 1e-6;
  return {pass, fmt("cylinder err %.2e, torus err %.2e (defect %.2e), random tubes max bound/area %.6f", cyl_err,
                    torus_err, defect, worst_ratio)};
}

Outcome ellipsoid_volume() {
  const auto ell = ConvexBody::ellipsoid(Vec3::Zero(), kAxes);
  const double exact = 4 * pi * kAxes.prod() / 3;
  const double v = axis_volume(ell, Vec3::UnitX(), Vec3::Zero());
  const double rel = std::abs(v - exact) / exact;
  return {rel < 1e-8, fmt("V = %.12f, rel err %.2e", v, rel)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"ellipsoid centroid curve vs closed form", ellipsoid_trace},
      {"ball cap volumes", ball_caps},
      {"torus volume from two centroid lines", torus_volume},
      {"rotating ellipses vs disks", rotating_ellipses},
      {"trace invariants", trace_invariants},
      {"quarter-circle rod centroid", quarter_rod},
      {"revolution segment centroid", revolution_segment},
      {"surface area lower bound", surface_bound},
      {"ellipsoid volume along an axis", ellipsoid_volume},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.pass) ++failed;
    std::printf("%s [%zu] %s: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                out.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
