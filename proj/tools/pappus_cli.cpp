// SPDX-License-Identifier: Apache-2.0
// Copyright 2026, the pappus authors
//
// pappus: command-line front end. Results go to stdout as JSON unless a
// subcommand writes CSV; errors go to stderr.
//   exit 0  success
//   exit 1  numerical failure
//   exit 2  invalid input or violated geometric condition

#include <pappus/pappus.hpp>

#include <CLI11.hpp>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace pappus;
using io::json;

namespace {

struct Job {
  std::string body;
  std::string ribbon;
  std::string profile;
  std::string spec;
  std::string grid;
  std::string out;
  std::string mode = "centroid-line";
  std::string axis = "0,0,1";
  std::string through;
  std::string offset = "0,0";
  std::string p0;
  std::string normal;
  std::string point;
  std::optional<double> h;
  std::optional<double> delta_max;
  std::optional<double> delta_min;
  int basin_check_every = defaults::trace_basin_check_every;
  int panels = defaults::s_panels;
  int samples = defaults::section_samples;
  std::uint64_t seed = defaults::mc_seed;
  std::uint64_t n = defaults::mc_samples;
  bool two_sided = false;
};

std::vector<double> parse_list(const std::string& text, std::size_t count, const char* flag) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    out.push_back(csv::parse_double(std::string_view(text).substr(pos, comma - pos)));
    pos = comma + 1;
  }
  if (out.size() != count) {
    throw ValidationError(std::string(flag) + ": expected " + std::to_string(count) + " comma-separated numbers");
  }
  return out;
}

Vec3 parse_vec3(const std::string& text, const char* flag) {
  const auto v = parse_list(text, 3, flag);
  return {v[0], v[1], v[2]};
}

Vec2 parse_vec2(const std::string& text, const char* flag) {
  const auto v = parse_list(text, 2, flag);
  return {v[0], v[1]};
}

ConvexBody load_body(const std::string& path) { return io::body_from_json(io::read_json_file(path)); }

Ribbon load_ribbon(const std::string& path) {
  return io::ribbon_from_json(io::read_json_file(path), fs::path(path).parent_path());
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot write '" + path + "'");
  return os;
}

void emit(const json& j, const std::string& out = {}) {
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    open_out(out) << j.dump(2) << '\n';
  }
}

void require(bool ok, const char* message) {
  if (!ok) throw ValidationError(message);
}

int run_volume(const Job& job) {
  json out;
  out["mode"] = job.mode;
  if (job.mode == "centroid-line") {
    require(!job.body.empty(), "volume: --body is required in centroid-line mode");
    const ConvexBody body = load_body(job.body);
    const Vec3 through = job.through.empty() ? body.interior_hint() : parse_vec3(job.through, "--through");
    const Vec3 axis = parse_vec3(job.axis, "--axis");
    require(axis.norm() > 0.0, "volume: --axis must be non-zero");
    out["volume"] = axis_volume(body, axis, through, job.samples);
    if (auto v = body.analytic_volume()) out["analytic_volume"] = *v;
  } else if (job.mode == "pappus") {
    require(!job.ribbon.empty(), "volume: --ribbon is required in pappus mode");
    require(job.body.empty() != job.profile.empty(), "volume: pappus mode needs exactly one of --body or --profile");
    const Ribbon ribbon = load_ribbon(job.ribbon);
    const SliceOptions so{job.panels, defaults::s_order};
    SliceSeries series;
    if (!job.body.empty()) {
      const ConvexBody body = load_body(job.body);
      series = slice_body(body, ribbon, so, job.samples);
    } else {
      const Profile prof = io::profile_from_json(io::read_json_file(job.profile));
      for (const auto& w : prof.warnings) std::cerr << "warning: " << w << '\n';
      const Vec2 offset = parse_vec2(job.offset, "--offset");
      series = slice_series(ribbon, [&](const RibbonSample& smp) { return section_from_profile(prof, smp, offset); },
                            so);
    }
    out["volume"] = pappus_volume(series);
    out["jacobian_margin"] = check_diffeo(series).margin;
    if (!job.out.empty()) {
      auto os = open_out(job.out);
      write_slice_csv(os, slice_rows(series));
    }
  } else {
    throw ValidationError("volume: --mode must be centroid-line or pappus");
  }
  emit(out);
  return 0;
}

int run_trace(const Job& job) {
  require(!job.body.empty() && !job.p0.empty(), "trace: --body and --p0 are required");
  const ConvexBody body = load_body(job.body);
  TraceOptions opt;
  opt.h = job.h;
  opt.delta_max = job.delta_max;
  opt.delta_min = job.delta_min;
  opt.backward = job.two_sided;
  opt.basin_check_every = job.basin_check_every;
  const CentroidCurveTrace tr = trace_centroid_curve(body, parse_vec3(job.p0, "--p0"), opt);
  const auto samples = job.two_sided ? tr.two_sided() : tr.forward.samples;
  if (job.out.empty()) {
    write_trace_csv(std::cout, samples);
    return 0;
  }
  {
    auto os = open_out(job.out);
    write_trace_csv(os, samples);
  }
  auto branch = [&](const TraceBranch& b) {
    json j;
    j["samples"] = b.samples.size();
    j["stop"] = to_string(b.stop);
    if (!b.diagnostics.empty()) j["diagnostics"] = b.diagnostics;
    if (!b.samples.empty()) {
      j["last"] = {{"s", b.samples.back().s},
                   {"point", io::to_json(b.samples.back().gamma)},
                   {"delta", b.samples.back().delta}};
    }
    return j;
  };
  json out;
  out["samples"] = samples.size();
  out["p0_on_boundary"] = tr.p0_on_boundary;
  out["forward"] = branch(tr.forward);
  if (job.two_sided) out["backward"] = branch(tr.backward);
  emit(out);
  return 0;
}

int run_rod(const Job& job) {
  require(!job.spec.empty(), "rod: --spec is required");
  json spec = io::read_json_file(job.spec);
  RodSpec rod = io::rod_from_json(spec, fs::path(job.spec).parent_path());
  if (!job.profile.empty()) rod.profile = io::profile_from_json(io::read_json_file(job.profile));
  for (const auto& w : rod.profile.warnings) std::cerr << "warning: " << w << '\n';
  emit(io::to_json(bent_rod_centroid(rod), rod.profile), job.out);
  return 0;
}

int run_section(const Job& job) {
  require(!job.body.empty() && !job.normal.empty() && !job.point.empty(),
          "section: --body, --normal and --point are required");
  const ConvexBody body = load_body(job.body);
  const Vec3 n = parse_vec3(job.normal, "--normal");
  require(n.norm() > 0.0, "section: --normal must be non-zero");
  const Vec3 p = parse_vec3(job.point, "--point");
  SectionOptions so;
  so.samples = job.samples;
  const SectionProfile prof = cross_section(body, SectionPlane::through(p, n.normalized()), so);
  json out = io::to_json(prof);
  if (!prof.empty) out["cut_volume"] = cut_volume(body, n.normalized(), p);
  if (!job.out.empty()) {
    auto os = open_out(job.out);
    csv::write_header(os, {"u", "v", "x", "y", "z"});
    for (const Vec2& b : prof.boundary) {
      const Vec3 x = prof.plane.global(b);
      csv::write_row(os, {b[0], b[1], x[0], x[1], x[2]});
    }
  }
  emit(out);
  return 0;
}

int run_surface_bound(const Job& job) {
  require(!job.ribbon.empty(), "surface-bound: --ribbon is required");
  require(job.grid.empty() != job.body.empty(), "surface-bound: needs exactly one of --grid or --body");
  const Ribbon ribbon = load_ribbon(job.ribbon);
  const BoundaryTrace tr = [&] {
    if (job.grid.empty()) {
      return boundary_trace_from_body(load_body(job.body), ribbon, job.panels, defaults::s_order, job.samples);
    }
    std::ifstream in(job.grid);
    if (!in) throw ValidationError("cannot open '" + job.grid + "'");
    return read_trace_grid_csv(in, ribbon);
  }();
  json out;
  out["bound"] = area_lower_bound(tr);
  out["equality_defect"] = equality_defect(tr);
  out["s_count"] = tr.s.size();
  out["t_count"] = tr.t_count;
  if (!job.out.empty()) {
    auto os = open_out(job.out);
    write_trace_grid_csv(os, tr);
  }
  emit(out);
  return 0;
}

int run_oracle(const Job& job) {
  require(job.body.empty() != job.spec.empty(), "oracle: needs exactly one of --body or --spec");
  json out;
  out["seed"] = job.seed;
  out["n"] = job.n;
  MonteCarloResult mc;
  if (!job.body.empty()) {
    const ConvexBody body = load_body(job.body);
    mc = monte_carlo_volume(body, job.seed, job.n);
    if (auto v = body.analytic_volume()) out["analytic_volume"] = *v;
  } else {
    const RodSpec rod = io::rod_from_json(io::read_json_file(job.spec), fs::path(job.spec).parent_path());
    const SweptSolid solid = rod_solid(rod);
    const auto [lo, hi] = solid.bounding_box();
    mc = monte_carlo_volume([&](const Vec3& x) { return solid.contains(x); }, lo, hi, job.seed, job.n);
    const RodResult res = bent_rod_centroid(rod);
    out["formula_volume"] = res.volume;
    out["formula_centroid"] = io::to_json(res.centroid);
  }
  out["volume"] = mc.volume;
  out["volume_std_error"] = mc.std_error;
  out["centroid"] = io::to_json(mc.centroid);
  out["centroid_std_error"] = io::to_json(mc.centroid_std_error);
  out["accepted"] = mc.accepted;
  emit(out, job.out);
  return 0;
}

void report(const std::string& kind, const std::string& message, int code, bool as_json) {
  if (as_json) {
    std::cerr << json{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}}.dump() << '\n';
  } else {
    std::cerr << "error: " << message << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  bool json_errors = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--json-errors") == 0) json_errors = true;
  }

  CLI::App app{"Volumes, centroids and centroid curves of swept and convex solids"};
  app.require_subcommand(1);
  app.add_flag("--json-errors", json_errors, "Report errors on stderr as JSON");
  Job job;

  auto* volume = app.add_subcommand("volume", "Volume by slicing along a line or ribbon");
  volume->add_option("--body", job.body, "Body spec (JSON)");
  volume->add_option("--ribbon", job.ribbon, "Ribbon spec (JSON)");
  volume->add_option("--profile", job.profile, "Constant section profile (JSON)");
  volume->add_option("--mode", job.mode, "centroid-line or pappus")->check(CLI::IsMember({"centroid-line", "pappus"}));
  volume->add_option("--axis", job.axis, "Slicing direction x,y,z");
  volume->add_option("--through", job.through, "Point on the slicing line x,y,z");
  volume->add_option("--offset", job.offset, "Profile centroid in ribbon coordinates u,v");
  volume->add_option("--panels", job.panels, "Gauss panels along the ribbon")->check(CLI::PositiveNumber);
  volume->add_option("--samples", job.samples, "Boundary samples per section")->check(CLI::PositiveNumber);
  volume->add_option("--out", job.out, "Slice table (CSV)");

  auto* trace = app.add_subcommand("trace", "Trace a centroid curve from p0");
  trace->set_help_flag("--help", "Print this help message and exit");  // frees the name for --h
  trace->add_option("--body", job.body, "Body spec (JSON)")->required();
  trace->add_option("--p0", job.p0, "Start point x,y,z")->required();
  trace->add_option("--h", job.h, "Arc-length step")->check(CLI::PositiveNumber);
  trace->add_option("--delta-max", job.delta_max, "Stop the forward branch at this cut volume")
      ->check(CLI::PositiveNumber);
  trace->add_option("--delta-min", job.delta_min, "Stop the backward branch at this cut volume")
      ->check(CLI::PositiveNumber);
  trace->add_option("--basin-check-every", job.basin_check_every, "Steps between global cut searches")
      ->check(CLI::PositiveNumber);
  trace->add_flag("--two-sided", job.two_sided, "Also trace towards the boundary");
  trace->add_option("--out", job.out, "Trace (CSV); summary JSON goes to stdout");

  auto* rod = app.add_subcommand("rod", "Centroid of a bent rod");
  rod->add_option("--spec", job.spec, "Rod spec (JSON)")->required();
  rod->add_option("--profile", job.profile, "Override the spec's profile (JSON)");
  rod->add_option("--out", job.out, "Result (JSON)");

  auto* section = app.add_subcommand("section", "Plane section of a body");
  section->add_option("--body", job.body, "Body spec (JSON)")->required();
  section->add_option("--normal", job.normal, "Plane normal x,y,z")->required();
  section->add_option("--point", job.point, "Point on the plane x,y,z")->required();
  section->add_option("--samples", job.samples, "Boundary samples")->check(CLI::PositiveNumber);
  section->add_option("--out", job.out, "Boundary samples (CSV)");

  auto* surface = app.add_subcommand("surface-bound", "Lower bound of the lateral surface area");
  surface->add_option("--ribbon", job.ribbon, "Ribbon spec (JSON)")->required();
  surface->add_option("--grid", job.grid, "Boundary grid s,t,u,v (CSV)");
  surface->add_option("--body", job.body, "Generate the grid from body sections (JSON)");
  surface->add_option("--panels", job.panels, "Gauss panels along the ribbon")->check(CLI::PositiveNumber);
  surface->add_option("--samples", job.samples, "Samples per boundary curve")->check(CLI::PositiveNumber);
  surface->add_option("--out", job.out, "Boundary grid (CSV)");

  auto* oracle = app.add_subcommand("oracle", "Monte-Carlo volume and centroid");
  oracle->add_option("--body", job.body, "Body spec (JSON)");
  oracle->add_option("--spec", job.spec, "Rod spec (JSON)");
  oracle->add_option("--seed", job.seed, "Generator seed");
  oracle->add_option("--n", job.n, "Sample count")->check(CLI::PositiveNumber);
  oracle->add_option("--out", job.out, "Result (JSON)");

  // Lets --json-errors follow the subcommand name.
  for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report("usage", e.what(), 2, json_errors);
    return 2;
  }

  try {
    if (*volume) return run_volume(job);
    if (*trace) return run_trace(job);
    if (*rod) return run_rod(job);
    if (*section) return run_section(job);
    if (*surface) return run_surface_bound(job);
    if (*oracle) return run_oracle(job);
  } catch (const ValidationError& e) {
    report("validation", e.what(), 2, json_errors);
    return 2;
  } catch (const NumericError& e) {
    report("numeric", e.what(), 1, json_errors);
    return 1;
  } catch (const std::exception& e) {
    report("numeric", e.what(), 1, json_errors);
    return 1;
  }
  return 2;
}
