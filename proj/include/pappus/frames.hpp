// SPDX-License-Identifier: Apache-2.0
// Copyright 2026, the pappus authors
#pragma once

#include <pappus/quadrature.hpp>
#include <pappus/types.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace pappus {

/// Orthonormal moving frame (T, N, B) with B = T x N.
struct Frame {
  Vec3 T = Vec3::UnitX();
  Vec3 N = Vec3::UnitY();
  Vec3 B = Vec3::UnitZ();

  static Frame identity() { return {}; }

  /// Gram-Schmidt on (T, N), then B = T x N.
  Frame orthonormalized() const {
    Frame f;
    f.T = T.normalized();
    f.N = (N - N.dot(f.T) * f.T).normalized();
    f.B = f.T.cross(f.N);
    return f;
  }

  /// Largest deviation from orthonormality (including B = T x N).
  double orthonormality_defect() const {
    double d = std::max({std::abs(T.norm() - 1.0), std::abs(N.norm() - 1.0), std::abs(B.norm() - 1.0)});
    d = std::max({d, std::abs(T.dot(N)), std::abs(T.dot(B)), std::abs(N.dot(B))});
    return std::max(d, (B - T.cross(N)).norm());
  }

  Mat3 matrix() const {
    Mat3 m;
    m.col(0) = T;
    m.col(1) = N;
    m.col(2) = B;
    return m;
  }
};

/// Normal curvature, geodesic curvature and geodesic torsion of a ribbon.
struct Curvatures {
  double kappa_n = 0.0;
  double kappa_g = 0.0;
  double tau_g = 0.0;
};

struct FrameRate {
  Vec3 dT, dN, dB;
};

/// Right-hand side of the frame system F' = F M with
///   M = [[0, -kn, kg], [kn, 0, -tg], [-kg, tg, 0]].
inline FrameRate frame_derivative(const Frame& f, const Curvatures& c) {
  return {c.kappa_n * f.N - c.kappa_g * f.B,
          -c.kappa_n * f.T + c.tau_g * f.B,
          c.kappa_g * f.T - c.tau_g * f.N};
}

struct RibbonSample {
  double s = 0.0;
  Vec3 gamma = Vec3::Zero();
  Frame frame;
  Curvatures curv;
};

/// A unit-speed curve together with a unit normal field, i.e. the pair
/// (gamma, N). Either closed-form (line, circular arc, helix) or a dense
/// table of samples.
class Ribbon {
 public:
  struct Line {
    Vec3 origin;
    Frame frame;
  };
  // Arc of radius R about `center`, in the plane spanned by the first two
  // columns of `basis`; starts at center + R * basis.col(0).
  struct Arc {
    Vec3 center;
    double radius;
    Mat3 basis;
  };
  // Helix around basis.col(2) through center: radius, rise per radian.
  struct Helix {
    Vec3 center;
    double radius;
    double rise;
    Mat3 basis;
  };
  using Analytic = std::variant<Line, Arc, Helix>;

  static Ribbon line(const Vec3& origin, const Vec3& tangent, const Vec3& normal, double length) {
    if (!(length > 0.0)) throw ValidationError("ribbon length must be positive");
    Frame f{tangent, normal, Vec3::Zero()};
    f = f.orthonormalized();
    return Ribbon(Line{origin, f}, 0.0, length);
  }

  static Ribbon arc(const Vec3& center, double radius, double angle, const Mat3& basis = Mat3::Identity()) {
    if (!(radius > 0.0) || !(angle > 0.0)) throw ValidationError("arc needs positive radius and angle");
    return Ribbon(Arc{center, radius, basis}, 0.0, radius * angle);
  }

  static Ribbon helix(const Vec3& center, double radius, double rise, double length,
                      const Mat3& basis = Mat3::Identity()) {
    if (!(radius > 0.0) || !(length > 0.0)) throw ValidationError("helix needs positive radius and length");
    return Ribbon(Helix{center, radius, rise, basis}, 0.0, length);
  }

  /// Table ribbon; samples must have strictly increasing s.
  static Ribbon sampled(std::vector<RibbonSample> samples) {
    if (samples.size() < 2) throw ValidationError("sampled ribbon needs at least two samples");
    for (std::size_t i = 1; i < samples.size(); ++i) {
      if (!(samples[i].s > samples[i - 1].s)) throw ValidationError("ribbon samples must have increasing s");
    }
    const double a = samples.front().s, b = samples.back().s;
    Ribbon r(std::move(samples), a, b);
    return r;
  }

  double s_begin() const { return s0_; }
  double s_end() const { return s1_; }
  double length() const { return s1_ - s0_; }
  bool is_sampled() const { return std::holds_alternative<Table>(rep_); }
  const std::vector<RibbonSample>& samples() const { return std::get<Table>(rep_).samples; }
  const Analytic* analytic() const {
    if (auto* a = std::get_if<AnalyticRep>(&rep_)) return &a->shape;
    return nullptr;
  }

  RibbonSample sample(double s) const {
    return std::visit([&](const auto& r) { return eval(r, s); }, rep_);
  }
  Vec3 point(double s) const { return sample(s).gamma; }
  Frame frame(double s) const { return sample(s).frame; }
  Curvatures curvatures(double s) const { return sample(s).curv; }

  /// `count` equispaced samples over [s_begin, s_end].
  std::vector<RibbonSample> discretize(int count) const {
    std::vector<RibbonSample> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(sample(s0_ + (s1_ - s0_) * i / (count - 1.0)));
    return out;
  }

 private:
  struct AnalyticRep {
    Analytic shape;
  };
  struct Table {
    std::vector<RibbonSample> samples;
  };

  Ribbon(Analytic a, double s0, double s1) : rep_(AnalyticRep{std::move(a)}), s0_(s0), s1_(s1) {}
  Ribbon(std::vector<RibbonSample> t, double s0, double s1) : rep_(Table{std::move(t)}), s0_(s0), s1_(s1) {}

  static RibbonSample eval(const AnalyticRep& a, double s) {
    return std::visit([&](const auto& shape) { return eval_shape(shape, s); }, a.shape);
  }

  static RibbonSample eval_shape(const Line& l, double s) {
    return {s, l.origin + s * l.frame.T, l.frame, {}};
  }

  static RibbonSample eval_shape(const Arc& a, double s) {
    const double t = s / a.radius, c = std::cos(t), sn = std::sin(t);
    const Vec3 ex = a.basis.col(0), ey = a.basis.col(1);
    RibbonSample out;
    out.s = s;
    out.gamma = a.center + a.radius * (c * ex + sn * ey);
    out.frame.T = -sn * ex + c * ey;
    out.frame.N = -(c * ex + sn * ey);
    out.frame.B = out.frame.T.cross(out.frame.N);
    out.curv = {1.0 / a.radius, 0.0, 0.0};
    return out;
  }

  // Frenet ribbon of the helix: kappa_g = 0, tau_g equals the torsion.
  static RibbonSample eval_shape(const Helix& h, double s) {
    const double speed = std::hypot(h.radius, h.rise);
    const double t = s / speed, c = std::cos(t), sn = std::sin(t);
    const Vec3 ex = h.basis.col(0), ey = h.basis.col(1), ez = h.basis.col(2);
    RibbonSample out;
    out.s = s;
    out.gamma = h.center + h.radius * (c * ex + sn * ey) + h.rise * t * ez;
    out.frame.T = (h.radius * (-sn * ex + c * ey) + h.rise * ez) / speed;
    out.frame.N = -(c * ex + sn * ey);
    out.frame.B = out.frame.T.cross(out.frame.N);
    const double d = speed * speed;
    out.curv = {h.radius / d, 0.0, h.rise / d};
    return out;
  }

  // Cubic Hermite for gamma (gamma' = T at the nodes), linear frame followed
  // by re-orthonormalisation, linear curvatures.
  static RibbonSample eval(const Table& t, double s) {
    const auto& v = t.samples;
    if (s <= v.front().s) return clamp_sample(v.front(), s);
    if (s >= v.back().s) return clamp_sample(v.back(), s);
    auto it = std::upper_bound(v.begin(), v.end(), s, [](double x, const RibbonSample& r) { return x < r.s; });
    const RibbonSample& b = *it;
    const RibbonSample& a = *(it - 1);
    const double h = b.s - a.s;
    const double u = (s - a.s) / h;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
    RibbonSample out;
    out.s = s;
    out.gamma = h00 * a.gamma + h10 * h * a.frame.T + h01 * b.gamma + h11 * h * b.frame.T;
    Frame f{(1 - u) * a.frame.T + u * b.frame.T, (1 - u) * a.frame.N + u * b.frame.N, Vec3::Zero()};
    out.frame = f.orthonormalized();
    out.curv.kappa_n = (1 - u) * a.curv.kappa_n + u * b.curv.kappa_n;
    out.curv.kappa_g = (1 - u) * a.curv.kappa_g + u * b.curv.kappa_g;
    out.curv.tau_g = (1 - u) * a.curv.tau_g + u * b.curv.tau_g;
    return out;
  }

  static RibbonSample clamp_sample(RibbonSample r, double s) {
    r.gamma += (s - r.s) * r.frame.T;
    r.s = s;
    return r;
  }

  std::variant<AnalyticRep, Table> rep_;
  double s0_ = 0.0, s1_ = 0.0;
};

using CurvatureFn = std::function<Curvatures(double)>;

/// Integrates the frame system together with gamma' = T by classical RK4 on
/// a fixed grid over [s0, s1] (step <= h), re-orthonormalising after every
/// step. Returns the sampled ribbon.
inline Ribbon evolve_frame(const CurvatureFn& curvature, const Frame& frame0, const Vec3& gamma0, double s0,
                           double s1, double h) {
  if (!(h > 0.0)) throw ValidationError("evolve_frame: step must be positive");
  if (!(s1 > s0)) throw ValidationError("evolve_frame: empty interval");
  const int steps = std::max(1, static_cast<int>(std::ceil((s1 - s0) / h - 1e-9)));
  const double dh = (s1 - s0) / steps;

  auto curv_at = [&](double s) {
    Curvatures c = curvature(s);
    if (!std::isfinite(c.kappa_n) || !std::isfinite(c.kappa_g) || !std::isfinite(c.tau_g)) {
      std::ostringstream msg;
      msg << "evolve_frame: non-finite curvature at s=" << s;
      throw NumericError(msg.str());
    }
    return c;
  };
  struct State {
    Vec3 g;
    Frame f;
  };
  auto rate = [&](double s, const State& x) {
    const FrameRate r = frame_derivative(x.f, curv_at(s));
    return State{x.f.T, Frame{r.dT, r.dN, r.dB}};
  };
  auto axpy = [](const State& x, double a, const State& k) {
    return State{x.g + a * k.g, Frame{x.f.T + a * k.f.T, x.f.N + a * k.f.N, x.f.B + a * k.f.B}};
  };

  std::vector<RibbonSample> out;
  out.reserve(steps + 1);
  State x{gamma0, frame0.orthonormalized()};
  out.push_back({s0, x.g, x.f, curv_at(s0)});
  for (int i = 0; i < steps; ++i) {
    const double s = s0 + i * dh;
    const State k1 = rate(s, x);
    const State k2 = rate(s + 0.5 * dh, axpy(x, 0.5 * dh, k1));
    const State k3 = rate(s + 0.5 * dh, axpy(x, 0.5 * dh, k2));
    const State k4 = rate(s + dh, axpy(x, dh, k3));
    x.g += dh / 6.0 * (k1.g + 2.0 * k2.g + 2.0 * k3.g + k4.g);
    x.f.T += dh / 6.0 * (k1.f.T + 2.0 * k2.f.T + 2.0 * k3.f.T + k4.f.T);
    x.f.N += dh / 6.0 * (k1.f.N + 2.0 * k2.f.N + 2.0 * k3.f.N + k4.f.N);
    x.f = x.f.orthonormalized();
    const double s_next = (i + 1 == steps) ? s1 : s0 + (i + 1) * dh;
    out.push_back({s_next, x.g, x.f, curv_at(s_next)});
  }
  return Ribbon::sampled(std::move(out));
}

/// Rotation-minimising transport of `normal` from the frame at x0 (tangent
/// t0) to x1 (tangent t1) by two reflections.
inline Vec3 double_reflection(const Vec3& x0, const Vec3& t0, const Vec3& normal, const Vec3& x1, const Vec3& t1) {
  const Vec3 v1 = x1 - x0;
  const double c1 = v1.squaredNorm();
  if (c1 == 0.0) return normal;
  const Vec3 rl = normal - (2.0 / c1) * v1.dot(normal) * v1;
  const Vec3 tl = t0 - (2.0 / c1) * v1.dot(t0) * v1;
  const Vec3 v2 = t1 - tl;
  const double c2 = v2.squaredNorm();
  const Vec3 r = (c2 == 0.0) ? rl : Vec3(rl - (2.0 / c2) * v2.dot(rl) * v2);
  return (r - r.dot(t1) * t1).normalized();
}

/// Frenet-type framing of a sampled arc-length curve: N follows T'/|T'|
/// wherever |T'| > 1e-8 (so kappa_g = 0 there) and is parallel transported
/// across straight stretches.
inline Ribbon frenet_ribbon(const std::vector<Vec3>& points, const std::vector<double>& s) {
  const std::size_t n = points.size();
  if (n < 4) throw ValidationError("frenet_ribbon: at least 4 samples required");
  if (s.size() != n) throw ValidationError("frenet_ribbon: parameter and point counts differ");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(s[i] > s[i - 1])) throw ValidationError("frenet_ribbon: arc length must increase");
    if ((points[i] - points[i - 1]).norm() == 0.0) throw ValidationError("frenet_ribbon: repeated point");
  }
  constexpr double straight_tol = 1e-8;
  constexpr double corner_tol = 1e-3;
  const std::size_t width = std::min<std::size_t>(5, n);

  std::vector<Vec3> d1(n), d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t st = quad::stencil_start(i, n, width);
    std::span<const double> xs(s.data() + st, width);
    const auto w1 = quad::fd_weights(s[i], xs, 1);
    const auto w2 = quad::fd_weights(s[i], xs, 2);
    d1[i].setZero();
    d2[i].setZero();
    for (std::size_t k = 0; k < width; ++k) {
      d1[i] += w1[k] * points[st + k];
      d2[i] += w2[k] * points[st + k];
    }
  }

  // Corner test: one-sided second-order tangents from either side.
  for (std::size_t i = 2; i + 2 < n; ++i) {
    auto one_sided = [&](std::size_t a, std::size_t b, std::size_t c) {
      const double xs_arr[3] = {s[a], s[b], s[c]};
      const auto w = quad::fd_weights(s[i], xs_arr, 1);
      return Vec3(w[0] * points[a] + w[1] * points[b] + w[2] * points[c]);
    };
    const Vec3 left = one_sided(i - 2, i - 1, i);
    const Vec3 right = one_sided(i, i + 1, i + 2);
    if (angle_between(left, right) > corner_tol) {
      std::ostringstream msg;
      msg << "frenet_ribbon: tangent discontinuity at s=" << s[i];
      throw ValidationError(msg.str());
    }
  }

  std::vector<Vec3> T(n), Tp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double speed = d1[i].norm();
    T[i] = d1[i] / speed;
    Tp[i] = (d2[i] - d2[i].dot(T[i]) * T[i]) / (speed * speed);
  }

  std::vector<Vec3> N(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (Tp[i].norm() > straight_tol) {
      N[i] = Tp[i].normalized();
    } else if (i == 0) {
      N[i] = any_orthogonal(T[i]);
    } else {
      N[i] = double_reflection(points[i - 1], T[i - 1], N[i - 1], points[i], T[i]);
    }
  }

  std::vector<RibbonSample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Frame f{T[i], N[i], T[i].cross(N[i])};
    out[i].s = s[i];
    out[i].gamma = points[i];
    out[i].frame = f;
    // tau_g = <N', B> with N' by finite differences of the framed normals.
    const std::size_t st = quad::stencil_start(i, n, width);
    std::span<const double> xs(s.data() + st, width);
    const auto w1 = quad::fd_weights(s[i], xs, 1);
    Vec3 dN = Vec3::Zero();
    for (std::size_t k = 0; k < width; ++k) dN += w1[k] * N[st + k];
    out[i].curv.kappa_n = Tp[i].dot(f.N);
    out[i].curv.kappa_g = -Tp[i].dot(f.B);
    out[i].curv.tau_g = dN.dot(f.B);
  }
  return Ribbon::sampled(std::move(out));
}

}  // namespace pappus
