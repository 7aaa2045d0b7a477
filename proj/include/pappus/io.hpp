// SPDX-License-Identifier: Apache-2.0
// Copyright 2026, the pappus authors
#pragma once

#include <pappus/body.hpp>
#include <pappus/csv.hpp>
#include <pappus/frames.hpp>
#include <pappus/rod.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

/// JSON specs for bodies, ribbons, profiles and rods.
namespace pappus::io {

using json = nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(std::string(what) + ": missing field '" + key + "'");
  }
  return j.at(key);
}

inline double number(const json& j, const char* key, const char* what) {
  const json& v = field(j, key, what);
  if (!v.is_number()) throw ValidationError(std::string(what) + ": field '" + key + "' must be a number");
  return v.get<double>();
}

inline double positive(const json& j, const char* key, const char* what) {
  const double x = number(j, key, what);
  if (!(x > 0.0)) throw ValidationError(std::string(what) + ": field '" + key + "' must be positive");
  return x;
}

inline Vec3 vec3(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number()) {
    throw ValidationError(what + ": expected an array of three numbers");
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

inline Vec3 vec3(const json& j, const char* key, const char* what) {
  return vec3(field(j, key, what), std::string(what) + "." + key);
}

inline Vec3 vec3_or(const json& j, const char* key, const char* what, const Vec3& fallback) {
  return j.contains(key) ? vec3(j, key, what) : fallback;
}

inline std::string type_of(const json& j, const char* what) {
  const json& t = field(j, "type", what);
  if (!t.is_string()) throw ValidationError(std::string(what) + ": 'type' must be a string");
  return t.get<std::string>();
}

// Right-handed basis with col(0) along x_axis and col(2) along axis.
inline Mat3 basis_from(const json& j, const char* what) {
  const Vec3 axis = vec3_or(j, "axis", what, Vec3::UnitZ());
  if (!(axis.norm() > 0.0)) throw ValidationError(std::string(what) + ": axis must be non-zero");
  const Vec3 z = axis.normalized();
  Vec3 x = vec3_or(j, "x_axis", what, any_orthogonal(z));
  x -= x.dot(z) * z;
  if (!(x.norm() > 1e-12)) throw ValidationError(std::string(what) + ": x_axis must not be parallel to axis");
  x.normalize();
  Mat3 b;
  b.col(0) = x;
  b.col(1) = z.cross(x);
  b.col(2) = z;
  return b;
}

}  // namespace detail

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path.string() + "': " + e.what());
  }
}

/// {"type": "ball", "center": [..], "radius": r}
/// {"type": "ellipsoid", "center": [..], "semi_axes": [a, b, c]}
/// {"type": "superquadric", "center": [..], "semi_axes": [..], "exponents": [..]}
inline ConvexBody body_from_json(const json& j) {
  const std::string type = detail::type_of(j, "body");
  const Vec3 c = detail::vec3_or(j, "center", "body", Vec3::Zero());
  if (type == "ball") return ConvexBody::ball(c, detail::positive(j, "radius", "body"));
  if (type == "ellipsoid") return ConvexBody::ellipsoid(c, detail::vec3(j, "semi_axes", "body"));
  if (type == "superquadric") {
    return ConvexBody::superquadric(c, detail::vec3(j, "semi_axes", "body"), detail::vec3(j, "exponents", "body"));
  }
  throw ValidationError("body: unknown type '" + type + "'");
}

/// Ribbon table from CSV. Columns s, x, y, z give a Frenet ribbon; adding
/// Tx..Tz, Nx..Nz, kn, kg, tau gives the table verbatim.
inline Ribbon ribbon_from_csv(std::istream& is) {
  const csv::Table t = csv::read(is);
  const std::size_t cs = t.column("s"), cx = t.column("x"), cy = t.column("y"), cz = t.column("z");
  const bool full = std::find(t.header.begin(), t.header.end(), "Nx") != t.header.end();
  if (!full) {
    std::vector<Vec3> pts;
    std::vector<double> s;
    for (const auto& r : t.rows) {
      s.push_back(r[cs]);
      pts.emplace_back(r[cx], r[cy], r[cz]);
    }
    return frenet_ribbon(pts, s);
  }
  const std::size_t c[9] = {t.column("Tx"), t.column("Ty"), t.column("Tz"), t.column("Nx"), t.column("Ny"),
                            t.column("Nz"), t.column("kn"), t.column("kg"), t.column("tau")};
  std::vector<RibbonSample> samples;
  for (const auto& r : t.rows) {
    RibbonSample smp;
    smp.s = r[cs];
    smp.gamma = Vec3(r[cx], r[cy], r[cz]);
    smp.frame.T = Vec3(r[c[0]], r[c[1]], r[c[2]]);
    smp.frame.N = Vec3(r[c[3]], r[c[4]], r[c[5]]);
    smp.frame = smp.frame.orthonormalized();
    smp.curv = {r[c[6]], r[c[7]], r[c[8]]};
    samples.push_back(smp);
  }
  return Ribbon::sampled(std::move(samples));
}

/// {"type": "line", "origin", "tangent", "normal", "length"}
/// {"type": "arc", "center", "radius", "angle", optional "axis", "x_axis"}
/// {"type": "helix", "center", "radius", "rise", "length", optional "axis", "x_axis"}
/// {"type": "csv", "path"}; relative paths resolve against `base_dir`.
inline Ribbon ribbon_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
  const std::string type = detail::type_of(j, "ribbon");
  if (type == "line") {
    const Vec3 t = detail::vec3(j, "tangent", "ribbon");
    const Vec3 n = detail::vec3_or(j, "normal", "ribbon", any_orthogonal(t.normalized()));
    if (!(t.norm() > 0.0) || !(t.cross(n).norm() > 1e-12 * t.norm() * n.norm())) {
      throw ValidationError("ribbon: tangent must be non-zero and not parallel to normal");
    }
    return Ribbon::line(detail::vec3_or(j, "origin", "ribbon", Vec3::Zero()), t.normalized(), n,
                        detail::positive(j, "length", "ribbon"));
  }
  if (type == "arc") {
    return Ribbon::arc(detail::vec3_or(j, "center", "ribbon", Vec3::Zero()), detail::positive(j, "radius", "ribbon"),
                       detail::positive(j, "angle", "ribbon"), detail::basis_from(j, "ribbon"));
  }
  if (type == "helix") {
    return Ribbon::helix(detail::vec3_or(j, "center", "ribbon", Vec3::Zero()), detail::positive(j, "radius", "ribbon"),
                         detail::number(j, "rise", "ribbon"), detail::positive(j, "length", "ribbon"),
                         detail::basis_from(j, "ribbon"));
  }
  if (type == "csv") {
    const json& p = detail::field(j, "path", "ribbon");
    if (!p.is_string()) throw ValidationError("ribbon: 'path' must be a string");
    std::filesystem::path path = p.get<std::string>();
    if (path.is_relative()) path = base_dir / path;
    std::ifstream in(path);
    if (!in) throw ValidationError("ribbon: cannot open '" + path.string() + "'");
    return ribbon_from_csv(in);
  }
  throw ValidationError("ribbon: unknown type '" + type + "'");
}

/// {"type": "disk", "r"} | {"type": "rectangle", "w", "h"} |
/// {"type": "ellipse", "a", "b"} | {"type": "polygon", "vertices": [[u, v], ...]}
inline Profile profile_from_json(const json& j) {
  const std::string type = detail::type_of(j, "profile");
  if (type == "disk") return profile_moments(shape::Disk{detail::positive(j, "r", "profile")});
  if (type == "rectangle") {
    return profile_moments(shape::Rectangle{detail::positive(j, "w", "profile"), detail::positive(j, "h", "profile")});
  }
  if (type == "ellipse") {
    return profile_moments(shape::Ellipse{detail::positive(j, "a", "profile"), detail::positive(j, "b", "profile")});
  }
  if (type == "polygon") {
    const json& vs = detail::field(j, "vertices", "profile");
    if (!vs.is_array()) throw ValidationError("profile: 'vertices' must be an array");
    shape::Polygon poly;
    for (const auto& v : vs) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ValidationError("profile: every vertex must be [u, v]");
      }
      poly.vertices.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    return profile_moments(poly);
  }
  throw ValidationError("profile: unknown type '" + type + "'");
}

/// {"curve": {...ribbon...}, "profile": {...}, "one_sided_kappa": false}
inline RodSpec rod_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
  RodSpec rod{ribbon_from_json(detail::field(j, "curve", "rod"), base_dir),
              profile_from_json(detail::field(j, "profile", "rod")), false};
  if (j.contains("one_sided_kappa")) {
    if (!j["one_sided_kappa"].is_boolean()) throw ValidationError("rod: 'one_sided_kappa' must be a boolean");
    rod.one_sided_kappa = j["one_sided_kappa"].get<bool>();
  }
  return rod;
}

inline json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
inline json to_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

inline json to_json(const RodResult& r, const Profile& p) {
  json out;
  out["volume"] = r.volume;
  out["centroid"] = to_json(r.centroid);
  out["curve_centroid"] = to_json(r.curve_centroid);
  out["conditions"] = {{"a", r.conditions.a}, {"b", r.conditions.b}, {"c", r.conditions.c}};
  out["mu"] = r.conditions.mu;
  out["profile"] = {{"A", p.area}, {"Iu", p.Iu}, {"Iv", p.Iv}, {"Iuv", p.Iuv}, {"symmetry", to_string(p.symmetry)}};
  if (!p.warnings.empty()) out["warnings"] = p.warnings;
  return out;
}

inline json to_json(const SectionProfile& s) {
  json out;
  out["empty"] = s.empty;
  out["area"] = s.area;
  out["centroid"] = to_json(s.centroid);
  out["local_centroid"] = to_json(s.local_centroid);
  out["Iu"] = s.Iu;
  out["Iv"] = s.Iv;
  out["Iuv"] = s.Iuv;
  if (s.has_perimeter) {
    out["perimeter"] = s.perimeter;
    out["boundary_line_centroid"] = to_json(s.boundary_line_centroid);
  }
  out["axes"] = {{"n", to_json(s.plane.n)}, {"u", to_json(s.plane.x1)}, {"v", to_json(s.plane.x2)}};
  return out;
}

}  // namespace pappus::io
