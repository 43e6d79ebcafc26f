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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spherebo/numerics.hpp"

namespace spherebo {

enum class ObjectiveFamily {
  AffineTrend,
  CenteredQuadratic,
  Ackley,
  Levy,
  Rosenbrock,
  SumOfSquaresWithLinearTrend,
  Custom,
};

/// A deterministic test function on [-1,1]^D, to be maximized. Minimization
/// benchmarks are negated when they are built.
class SyntheticObjective {
 public:
  using Fn = std::function<double(const Vector&)>;

  SyntheticObjective(std::string id, int dim, ObjectiveFamily family, Fn fn,
                     std::optional<double> known_optimum = std::nullopt,
                     std::optional<Vector> known_argmax = std::nullopt);

  const std::string& id() const { return id_; }
  int dim() const { return dim_; }
  ObjectiveFamily family() const { return family_; }
  const std::optional<double>& known_optimum() const { return known_optimum_; }
  const std::optional<Vector>& known_argmax() const { return known_argmax_; }

  /// Throws DimensionMismatch for wrongly sized input.
  double operator()(const Vector& x) const;

 private:
  std::string id_;
  int dim_;
  ObjectiveFamily family_;
  Fn fn_;
  std::optional<double> known_optimum_;
  std::optional<Vector> known_argmax_;
};

/// Registered ids: affine_trend, centered_quadratic, ackley, levy,
/// rosenbrock, sum_squares_trend. `instance_seed` draws the random
/// coefficients and offsets of one problem instance.
SyntheticObjective make_objective(std::string_view id, int dim,
                                  std::uint64_t instance_seed = 0);

std::vector<std::string> objective_ids();

}  // namespace spherebo
