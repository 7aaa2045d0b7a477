// SPDX-License-Identifier: Apache-2.0
// Copyright 2026, the pappus authors
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pappus {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double pi = std::numbers::pi;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a precondition: bad spec, geometric condition not met.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure did not reach its tolerance.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Unit vector orthogonal to `n`, built from the coordinate axis least
/// aligned with `n` (lowest index on ties).
inline Vec3 any_orthogonal(const Vec3& n) {
  int k = 0;
  double best = std::abs(n[0]);
  for (int i = 1; i < 3; ++i) {
    if (std::abs(n[i]) < best - 1e-15) {
      best = std::abs(n[i]);
      k = i;
    }
  }
  Vec3 e = Vec3::Zero();
  e[k] = 1.0;
  return (e - e.dot(n) * n).normalized();
}

/// Angle between two vectors in radians, robust near 0 and pi.
inline double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace pappus
