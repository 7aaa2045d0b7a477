// SPDX-License-Identifier: Apache-2.0
// Copyright 2026, the pappus authors
#pragma once

#include <pappus/volume.hpp>

#include <cmath>
#include <functional>

namespace fixtures {

using pappus::Ribbon;
using pappus::RibbonSample;
using pappus::SweptSolid;
using pappus::Vec2;
using pappus::Vec3;

using ScalarOfS = std::function<double(double)>;
using PointOfS = std::function<Vec2(double)>;

inline PointOfS centred() {
  return [](double) { return Vec2(0, 0); };
}

/// Tube of disks with radius r(s), centred at c(s) in ribbon coordinates.
inline SweptSolid disk_tube(Ribbon rib, ScalarOfS r, double r_max, PointOfS c = centred(), double c_max = 0.0) {
  SweptSolid solid{std::move(rib), {}, {}, r_max + c_max};
  solid.section = [r, c](const RibbonSample& smp) { return pappus::disk_section(smp, c(smp.s), r(smp.s)); };
  solid.inside = [r, c](double s, const Vec2& uv) { return (uv - c(s)).squaredNorm() < r(s) * r(s); };
  return solid;
}

/// Tube of ellipses with semi-axes a(s), b(s) rotated by theta(s), centred at c(s).
inline SweptSolid ellipse_tube(Ribbon rib, ScalarOfS a, ScalarOfS b, ScalarOfS theta, double extent,
                               PointOfS c = centred()) {
  SweptSolid solid{std::move(rib), {}, {}, extent};
  solid.section = [=](const RibbonSample& smp) {
    return pappus::ellipse_section(smp, c(smp.s), a(smp.s), b(smp.s), theta(smp.s));
  };
  solid.inside = [=](double s, const Vec2& uv) {
    const Vec2 d = uv - c(s);
    const double ct = std::cos(theta(s)), st = std::sin(theta(s));
    const double p = (ct * d[0] + st * d[1]) / a(s), q = (-st * d[0] + ct * d[1]) / b(s);
    return p * p + q * q < 1.0;
  };
  return solid;
}

inline pappus::MonteCarloResult monte_carlo(const SweptSolid& solid, std::uint64_t seed, std::uint64_t n) {
  const auto [lo, hi] = solid.bounding_box();
  return pappus::monte_carlo_volume([&](const Vec3& x) { return solid.contains(x); }, lo, hi, seed, n);
}

}  // namespace fixtures
