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

#include <Eigen/Core>

#include <span>
#include <vector>

namespace spherebo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Throws InvalidArgument if any entry is NaN or infinite.
void require_finite(const Eigen::Ref<const Matrix>& m, const char* what);

/// Lower-triangular Cholesky factor of A + jitter * I.
struct CholeskyFactor {
  Matrix lower;
  double jitter_used = 0.0;

  Eigen::Index size() const { return lower.rows(); }

  /// Solves (L L^T) x = b.
  Vector solve(const Eigen::Ref<const Vector>& b) const;
  Matrix solve_many(const Eigen::Ref<const Matrix>& b) const;

  /// Solves L x = b.
  Vector solve_lower(const Eigen::Ref<const Vector>& b) const;

  /// log det(L L^T).
  double log_det() const;

  /// Reconstructs L L^T.
  Matrix reconstruct() const;
};

/// The jitter ladder tried in order by cholesky().
inline constexpr double kJitterLadder[] = {0.0, 1e-10, 1e-8, 1e-6, 1e-4};

/// Factors a symmetric matrix, adding the smallest jitter from kJitterLadder
/// (not exceeding max_jitter) that makes the factorization succeed. Throws
/// NotPositiveDefinite when every admissible rung fails.
CholeskyFactor cholesky(const Eigen::Ref<const Matrix>& a,
                        double max_jitter = 1e-4);

/// Stacks points as the rows of an n x D matrix.
Matrix stack_rows(std::span<const Vector> points);

double mean(std::span<const double> values);

/// Sample standard deviation (n - 1 denominator); zero for fewer than two values.
double sample_stddev(std::span<const double> values);

}  // namespace spherebo
