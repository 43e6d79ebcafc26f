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

#include "spherebo/numerics.hpp"

#include <Eigen/Cholesky>
#include <fmt/format.h>

#include <cmath>
#include <numeric>

#include "spherebo/errors.hpp"

namespace spherebo {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NormExceedsGamma: return "NormExceedsGamma";
    case ErrorKind::ZeroVectorUnmappable: return "ZeroVectorUnmappable";
    case ErrorKind::NorthPoleSingularity: return "NorthPoleSingularity";
    case ErrorKind::UnsupportedVariant: return "UnsupportedVariant";
    case ErrorKind::RankTooLargeToMaterialize: return "RankTooLargeToMaterialize";
    case ErrorKind::UnsupportedForFunctionSpace: return "UnsupportedForFunctionSpace";
    case ErrorKind::ObjectiveEvaluationFailed: return "ObjectiveEvaluationFailed";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

void require_finite(const Eigen::Ref<const Matrix>& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("{}: non-finite entry", what));
  }
}

Vector CholeskyFactor::solve(const Eigen::Ref<const Vector>& b) const {
  Vector x = lower.triangularView<Eigen::Lower>().solve(b);
  lower.triangularView<Eigen::Lower>().transpose().solveInPlace(x);
  return x;
}

Matrix CholeskyFactor::solve_many(const Eigen::Ref<const Matrix>& b) const {
  Matrix x = lower.triangularView<Eigen::Lower>().solve(b);
  lower.triangularView<Eigen::Lower>().transpose().solveInPlace(x);
  return x;
}

Vector CholeskyFactor::solve_lower(const Eigen::Ref<const Vector>& b) const {
  return lower.triangularView<Eigen::Lower>().solve(b);
}

double CholeskyFactor::log_det() const {
  return 2.0 * lower.diagonal().array().log().sum();
}

Matrix CholeskyFactor::reconstruct() const {
  return lower * lower.transpose();
}

CholeskyFactor cholesky(const Eigen::Ref<const Matrix>& a, double max_jitter) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "cholesky: matrix is not square");
  }
  require_finite(a, "cholesky");
  const auto n = a.rows();
  for (double jitter : kJitterLadder) {
    if (jitter > max_jitter) break;
    Matrix shifted = a;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Matrix> llt(shifted);
    if (llt.info() != Eigen::Success) continue;
    Matrix l = llt.matrixL();
    // LLT only rejects non-positive pivots; a positive but denormal pivot
    // still yields a useless factor.
    if (n > 0 && !(l.diagonal().minCoeff() > 0.0 && l.allFinite())) continue;
    return CholeskyFactor{std::move(l), jitter};
  }
  throw Error(ErrorKind::NotPositiveDefinite,
              fmt::format("cholesky: {}x{} matrix not positive definite with "
                          "jitter up to {:g}",
                          n, n, max_jitter));
}

Matrix stack_rows(std::span<const Vector> points) {
  if (points.empty()) return Matrix(0, 0);
  const auto d = points.front().size();
  Matrix out(static_cast<Eigen::Index>(points.size()), d);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != d) {
      throw Error(ErrorKind::DimensionMismatch, "stack_rows: ragged points");
    }
    out.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
  }
  return out;
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace spherebo
