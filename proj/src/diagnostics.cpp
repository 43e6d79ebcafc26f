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

#include "spherebo/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "spherebo/errors.hpp"

namespace spherebo {
namespace {

Matrix distance_matrix(std::span<const Vector> points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = (points[i] - points[j]).norm();
    }
  }
  return d;
}

double path_length(const Matrix& d, const std::vector<int>& order) {
  double total = 0.0;
  for (std::size_t i = 1; i < order.size(); ++i) total += d(order[i - 1], order[i]);
  return total;
}

double held_karp(const Matrix& d) {
  const int n = static_cast<int>(d.rows());
  const std::size_t full = (std::size_t{1} << n);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dp(full * n, inf);
  for (int j = 0; j < n; ++j) dp[(std::size_t{1} << j) * n + j] = 0.0;
  for (std::size_t mask = 1; mask < full; ++mask) {
    for (int j = 0; j < n; ++j) {
      const double cur = dp[mask * n + j];
      if (!(mask & (std::size_t{1} << j)) || cur == inf) continue;
      for (int k = 0; k < n; ++k) {
        if (mask & (std::size_t{1} << k)) continue;
        const std::size_t next = mask | (std::size_t{1} << k);
        double& slot = dp[next * n + k];
        slot = std::min(slot, cur + d(j, k));
      }
    }
  }
  double best = inf;
  for (int j = 0; j < n; ++j) best = std::min(best, dp[(full - 1) * n + j]);
  return best;
}

std::vector<int> nearest_neighbour(const Matrix& d, int start) {
  const int n = static_cast<int>(d.rows());
  std::vector<int> order{start};
  std::vector<char> used(n, 0);
  used[start] = 1;
  int cur = start;
  for (int step = 1; step < n; ++step) {
    int best = -1;
    for (int k = 0; k < n; ++k) {
      if (!used[k] && (best < 0 || d(cur, k) < d(cur, best))) best = k;
    }
    used[best] = 1;
    order.push_back(best);
    cur = best;
  }
  return order;
}

// First-improvement 2-opt for open paths: reversing order[i..k] replaces the
// edges (i-1, i) and (k, k+1); either may be absent at the path ends.
void two_opt(const Matrix& d, std::vector<int>& order, int max_sweeps = 50) {
  const int n = static_cast<int>(order.size());
  constexpr double kEps = 1e-12;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool improved = false;
    for (int i = 0; i < n - 1; ++i) {
      for (int k = i + 1; k < n; ++k) {
        if (i == 0 && k == n - 1) continue;
        double before = 0.0, after = 0.0;
        if (i > 0) {
          before += d(order[i - 1], order[i]);
          after += d(order[i - 1], order[k]);
        }
        if (k < n - 1) {
          before += d(order[k], order[k + 1]);
          after += d(order[i], order[k + 1]);
        }
        if (after < before - kEps) {
          std::reverse(order.begin() + i, order.begin() + k + 1);
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
}

double heuristic_from_matrix(const Matrix& d) {
  const int n = static_cast<int>(d.rows());
  double best = std::numeric_limits<double>::infinity();
  for (int start = 0; start < n; ++start) {
    std::vector<int> order = nearest_neighbour(d, start);
    two_opt(d, order);
    best = std::min(best, path_length(d, order));
  }
  return best;
}

}  // namespace

double boundary_fraction(const Eigen::Ref<const Vector>& x, double tol) {
  if (x.size() == 0) return 0.0;
  const auto on_boundary = (x.array().abs() >= 1.0 - tol).count();
  return static_cast<double>(on_boundary) / static_cast<double>(x.size());
}

double otsd_exact(std::span<const Vector> points) {
  if (points.size() > static_cast<std::size_t>(kOtsdExactMaxPoints)) {
    throw Error(ErrorKind::InvalidArgument, "otsd_exact: too many points");
  }
  if (points.size() < 2) return 0.0;
  return held_karp(distance_matrix(points));
}

double otsd_heuristic(std::span<const Vector> points) {
  if (points.size() < 2) return 0.0;
  return heuristic_from_matrix(distance_matrix(points));
}

double otsd(std::span<const Vector> points) {
  if (points.size() <= static_cast<std::size_t>(kOtsdExactMaxPoints)) return otsd_exact(points);
  return otsd_series(points).back();
}

std::vector<double> otsd_series(std::span<const Vector> points) {
  std::vector<double> series;
  if (points.size() < 2) return series;
  const Matrix d = distance_matrix(points);
  const int n = static_cast<int>(points.size());
  // Warm start: the previous best path with the new point inserted at its
  // cheapest position, then 2-opt.
  std::vector<int> order{0};
  for (int t = 2; t <= n; ++t) {
    const int p = t - 1;
    const Matrix sub = d.topLeftCorner(t, t);
    if (t <= kOtsdExactMaxPoints) {
      series.push_back(held_karp(sub));
    }
    double best_cost = std::numeric_limits<double>::infinity();
    std::size_t best_pos = 0;
    for (std::size_t pos = 0; pos <= order.size(); ++pos) {
      double cost;
      if (pos == 0) {
        cost = d(p, order.front());
      } else if (pos == order.size()) {
        cost = d(order.back(), p);
      } else {
        cost = d(order[pos - 1], p) + d(p, order[pos]) - d(order[pos - 1], order[pos]);
      }
      if (cost < best_cost) {
        best_cost = cost;
        best_pos = pos;
      }
    }
    order.insert(order.begin() + static_cast<std::ptrdiff_t>(best_pos), p);
    two_opt(d, order);
    if (t > kOtsdExactMaxPoints) {
      // Also try fresh nearest-neighbour starts on small prefixes.
      double value = path_length(d, order);
      if (t <= 64 || t == n) value = std::min(value, heuristic_from_matrix(sub));
      series.push_back(value);
    }
  }
  for (std::size_t i = series.size() - 1; i-- > 0;) series[i] = std::min(series[i], series[i + 1]);
  return series;
}

}  // namespace spherebo
