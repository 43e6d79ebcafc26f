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

#include "spherebo/objectives.hpp"

#include <Eigen/QR>
#include <fmt/format.h>

#include <cmath>
#include <numbers>

#include "spherebo/errors.hpp"
#include "spherebo/rng.hpp"

namespace spherebo {

SyntheticObjective::SyntheticObjective(std::string id, int dim, ObjectiveFamily family, Fn fn,
                                       std::optional<double> known_optimum,
                                       std::optional<Vector> known_argmax)
    : id_(std::move(id)),
      dim_(dim),
      family_(family),
      fn_(std::move(fn)),
      known_optimum_(known_optimum),
      known_argmax_(std::move(known_argmax)) {}

double SyntheticObjective::operator()(const Vector& x) const {
  if (x.size() != dim_) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("objective {}: expected {} coordinates, got {}", id_, dim_, x.size()));
  }
  return fn_(x);
}

namespace {

// f(x) = c^T x; maximized at the box corner sign(c).
SyntheticObjective affine_trend(int dim, RandomStream& rng) {
  Vector c = rng.normal_vector(dim);
  Vector argmax = c.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
  const double best = c.lpNorm<1>();
  return SyntheticObjective("affine_trend", dim, ObjectiveFamily::AffineTrend,
                            [c](const Vector& x) { return c.dot(x); }, best, argmax);
}

// f(x) = -(x - x0)^T Q (x - x0) with Q = R diag(lambda) R^T, R a random
// rotation and lambda log-uniform on [0.1, 10].
SyntheticObjective centered_quadratic(int dim, RandomStream& rng) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) g.col(i) = rng.normal_vector(dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix rot = qr.householderQ() * Matrix::Identity(dim, dim);
  Vector lambda(dim);
  for (int i = 0; i < dim; ++i) lambda[i] = std::pow(10.0, rng.uniform(-1.0, 1.0));
  const Matrix q = rot * lambda.asDiagonal() * rot.transpose();
  const Vector center = rng.uniform_vector(dim, -0.5, 0.5);
  return SyntheticObjective(
      "centered_quadratic", dim, ObjectiveFamily::CenteredQuadratic,
      [q, center](const Vector& x) {
        const Vector d = x - center;
        return -d.dot(q * d);
      },
      0.0, center);
}

// f(x) = -||x - x0||^2 + c^T x, maximized at x0 + c/2.
SyntheticObjective sum_squares_trend(int dim, RandomStream& rng) {
  const Vector center = rng.uniform_vector(dim, -0.3, 0.3);
  const Vector c = rng.uniform_vector(dim, -0.5, 0.5);
  const Vector argmax = center + 0.5 * c;
  const double best = -(argmax - center).squaredNorm() + c.dot(argmax);
  return SyntheticObjective(
      "sum_squares_trend", dim, ObjectiveFamily::SumOfSquaresWithLinearTrend,
      [center, c](const Vector& x) { return -(x - center).squaredNorm() + c.dot(x); }, best,
      argmax);
}

// Negated Ackley on [-32.768, 32.768]^D, shifted by a random offset.
SyntheticObjective ackley(int dim, RandomStream& rng) {
  const Vector shift = rng.uniform_vector(dim, -0.2, 0.2);
  return SyntheticObjective(
      "ackley", dim, ObjectiveFamily::Ackley,
      [shift](const Vector& x) {
        const Vector s = 32.768 * (x - shift);
        const double n = static_cast<double>(s.size());
        const double a = -20.0 * std::exp(-0.2 * std::sqrt(s.squaredNorm() / n));
        const double b = -std::exp((2.0 * std::numbers::pi * s.array()).cos().sum() / n);
        return -(a + b + 20.0 + std::numbers::e);
      },
      0.0, shift);
}

// Negated Levy on [-10, 10]^D.
SyntheticObjective levy(int dim, RandomStream&) {
  return SyntheticObjective(
      "levy", dim, ObjectiveFamily::Levy,
      [](const Vector& x) {
        const Vector w = (1.0 + (10.0 * x.array() - 1.0) / 4.0).matrix();
        const double pi = std::numbers::pi;
        const auto d = w.size();
        double total = std::pow(std::sin(pi * w[0]), 2);
        for (Eigen::Index i = 0; i + 1 < d; ++i) {
          total += (w[i] - 1.0) * (w[i] - 1.0) *
                   (1.0 + 10.0 * std::pow(std::sin(pi * w[i] + 1.0), 2));
        }
        total += (w[d - 1] - 1.0) * (w[d - 1] - 1.0) *
                 (1.0 + std::pow(std::sin(2.0 * pi * w[d - 1]), 2));
        return -total;
      },
      0.0, Vector::Constant(dim, 0.1));
}

// Negated Rosenbrock on [-5, 10]^D.
SyntheticObjective rosenbrock(int dim, RandomStream&) {
  return SyntheticObjective(
      "rosenbrock", dim, ObjectiveFamily::Rosenbrock,
      [](const Vector& x) {
        const Vector s = (7.5 * x.array() + 2.5).matrix();
        double total = 0.0;
        for (Eigen::Index i = 0; i + 1 < s.size(); ++i) {
          total += 100.0 * std::pow(s[i + 1] - s[i] * s[i], 2) + std::pow(1.0 - s[i], 2);
        }
        return -total;
      },
      0.0, Vector::Constant(dim, -0.2));
}

}  // namespace

std::vector<std::string> objective_ids() {
  return {"affine_trend", "centered_quadratic", "ackley", "levy", "rosenbrock",
          "sum_squares_trend"};
}

SyntheticObjective make_objective(std::string_view id, int dim, std::uint64_t instance_seed) {
  if (dim < 1) throw Error(ErrorKind::InvalidArgument, "objective dimension must be >= 1");
  RandomStream rng(instance_seed, 0x0B1EC7ull);
  if (id == "affine_trend") return affine_trend(dim, rng);
  if (id == "centered_quadratic") return centered_quadratic(dim, rng);
  if (id == "sum_squares_trend") return sum_squares_trend(dim, rng);
  if (id == "ackley") return ackley(dim, rng);
  if (id == "levy") return levy(dim, rng);
  if (id == "rosenbrock") {
    if (dim < 2) throw Error(ErrorKind::InvalidArgument, "rosenbrock needs dim >= 2");
    return rosenbrock(dim, rng);
  }
  throw Error(ErrorKind::InvalidConfig, fmt::format("unknown objective '{}'", id));
}

}  // namespace spherebo
