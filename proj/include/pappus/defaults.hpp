// SPDX-License-Identifier: Apache-2.0
// Copyright 2026, the pappus authors
#pragma once

// Numeric defaults shared by the library and the command-line tool. Every
// tolerance and sample count that is not an explicit argument lives here.
namespace pappus::defaults {

inline constexpr int section_samples = 256;         // polar samples per cross-section
inline constexpr int pole_probe_directions = 32;    // in-plane probes when the hint misses
inline constexpr double halfspace_rel_tol = 1e-9;   // adaptive z-quadrature
inline constexpr int s_panels = 64;                 // composite Gauss-Legendre in s
inline constexpr int s_order = 4;
inline constexpr double centroid_line_rel_tol = 1e-12;

inline constexpr int cut_starts = 12;                // icosahedral starts
inline constexpr int cut_max_iter = 500;
inline constexpr double cut_residual_tol = 1e-7;    // times bounding radius
inline constexpr double cut_distinct_angle = 5.0;    // degrees
inline constexpr int cut_phi_samples = 128;          // azimuthal samples of the star integral
inline constexpr double cut_volume_rel_tol = 1e-13;

inline constexpr double trace_step_fraction = 1.0 / 500.0;  // h = bounding radius * this
inline constexpr int trace_basin_check_every = 25;
inline constexpr double trace_max_turn = 30.0;               // degrees per step
inline constexpr double trace_area_floor = 1e-6;             // times bounding radius^2
inline constexpr int trace_max_steps = 200000;

inline constexpr double kappa_g_tol = 1e-8;
inline constexpr double mc_sigmas = 4.0;
inline constexpr unsigned long long mc_samples = 10'000'000ULL;
inline constexpr unsigned long long mc_seed = 20260101ULL;

}  // namespace pappus::defaults
