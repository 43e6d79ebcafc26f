// Copyright 2026 The SphereBO Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

#pragma once

#include <span>
#include <vector>

#include "spherebo/numerics.hpp"

namespace spherebo {

inline constexpr double kBoundaryTolerance = 1e-6;

/// Share of coordinates with |x_i| >= 1 - tol.
double boundary_fraction(const Eigen::Ref<const Vector>& x, double tol = kBoundaryTolerance);

/// Largest n solved exactly by otsd().
inline constexpr int kOtsdExactMaxPoints = 13;

/// Exact shortest open Hamiltonian path (Held-Karp), n <= kOtsdExactMaxPoints.
double otsd_exact(std::span<const Vector> points);

/// Nearest-neighbour tours from every start, each improved by first-improvement
/// 2-opt (at most 50 sweeps); returns the shortest.
double otsd_heuristic(std::span<const Vector> points);

/// Observation traveling salesman distance: length of the shortest open path
/// through all points (Euclidean). Exact up to kOtsdExactMaxPoints points;
/// beyond that, the final entry of otsd_series(). Zero for fewer than two
/// points.
double otsd(std::span<const Vector> points);

/// OTSD of every prefix of length 2..n (entry t-2 covers the first t points).
/// Prefixes beyond the exact limit reuse the previous path with the new point
/// inserted at its cheapest position, followed by 2-opt; short prefixes and
/// the full list also try otsd_heuristic(). Heuristic prefix values are
/// tightened backwards, since a path through t+1 points shortcut past its last
/// point is a path through the first t points; the series is therefore
/// nondecreasing.
std::vector<double> otsd_series(std::span<const Vector> points);

}  // namespace spherebo
