// SPDX-License-Identifier: Apache-2.0
// Copyright 2026, the pappus authors
#pragma once

#include <pappus/body.hpp>
#include <pappus/csv.hpp>
#include <pappus/curve.hpp>
#include <pappus/defaults.hpp>
#include <pappus/frames.hpp>
#include <pappus/io.hpp>
#include <pappus/quadrature.hpp>
#include <pappus/random.hpp>
#include <pappus/rod.hpp>
#include <pappus/surface.hpp>
#include <pappus/types.hpp>
#include <pappus/volume.hpp>
