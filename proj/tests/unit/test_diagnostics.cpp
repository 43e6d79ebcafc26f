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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "doctest.h"
#include "spherebo/diagnostics.hpp"
#include "spherebo/rng.hpp"

using namespace spherebo;

namespace {

// Shortest open path by trying every permutation; n <= 8.
double brute_force_path(const std::vector<Vector>& pts) {
  std::vector<int> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double len = 0.0;
    for (std::size_t i = 1; i < order.size(); ++i) len += (pts[order[i]] - pts[order[i - 1]]).norm();
    best = std::min(best, len);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

std::vector<Vector> random_points(int n, int d, RandomStream& rng) {
  std::vector<Vector> pts;
  for (int i = 0; i < n; ++i) pts.push_back(rng.uniform_vector(d, -1, 1));
  return pts;
}

}  // namespace

TEST_CASE("boundary fraction") {
  CHECK(boundary_fraction(Vector::Ones(5)) == 1.0);
  CHECK(boundary_fraction(-Vector::Ones(5)) == 1.0);
  CHECK(boundary_fraction(Vector::Zero(5)) == 0.0);
  Vector x(4);
  x << 1, 0.5, -1, 0;
  CHECK(boundary_fraction(x) == 0.5);
  x << 1 - 1e-7, 1 - 1e-5, 0, 0;
  CHECK(boundary_fraction(x) == 0.25);
  CHECK(boundary_fraction(x, 1e-4) == 0.5);
}

TEST_CASE("otsd small cases") {
  std::vector<Vector> two{Vector::Zero(3), Vector::Ones(3)};
  CHECK(otsd(two) == doctest::Approx(std::sqrt(3.0)));
  std::vector<Vector> line;
  for (int i : {3, 0, 4, 1, 2}) line.push_back(Vector::Unit(2, 0) * i);
  CHECK(otsd(line) == doctest::Approx(4.0));
  CHECK(otsd(std::vector<Vector>{Vector::Zero(2)}) == 0.0);
}

TEST_CASE("held-karp matches brute force") {
  RandomStream rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pts = random_points(2 + static_cast<int>(rng.below(7)), 3, rng);
    CHECK(otsd_exact(pts) == doctest::Approx(brute_force_path(pts)).epsilon(1e-12));
  }
}

TEST_CASE("heuristic stays within 5% of the exact path") {
  RandomStream rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pts = random_points(10, 3, rng);
    const double exact = otsd_exact(pts);
    const double heur = otsd_heuristic(pts);
    CHECK(heur >= exact - 1e-12);
    CHECK(heur <= 1.05 * exact);
  }
}

TEST_CASE("otsd series is nondecreasing and consistent") {
  RandomStream rng(3);
  for (int d : {2, 20}) {
    const auto pts = random_points(60, d, rng);
    const auto series = otsd_series(pts);
    REQUIRE(series.size() == 59);
    for (std::size_t i = 1; i < series.size(); ++i) CHECK(series[i] >= series[i - 1]);
    CHECK(series.back() == doctest::Approx(otsd(pts)));
    // Exact prefix values up to the Held-Karp limit.
    for (int t = 2; t <= kOtsdExactMaxPoints; ++t) {
      CHECK(series[t - 2] == doctest::Approx(otsd_exact(std::span(pts).first(t))));
    }
    // Any heuristic value is a real path length, so at least the exact minimum
    // of a checkable prefix and at most the identity-order path.
    double identity = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) identity += (pts[i] - pts[i - 1]).norm();
    CHECK(series.back() <= identity);
  }
}

TEST_CASE("otsd is deterministic") {
  RandomStream rng(4);
  const auto pts = random_points(40, 5, rng);
  CHECK(otsd(pts) == otsd(pts));
  CHECK(otsd_series(pts) == otsd_series(pts));
}
