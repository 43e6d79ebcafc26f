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

#include <cstddef>
#include <string_view>

#include "spherebo/geometry.hpp"
#include "spherebo/numerics.hpp"

namespace spherebo {

enum class KernelFamily {
  StandardLinear,   // b0 + b1 z^T z'
  SphericalLinear,  // b0 + b1 P(z)^T P(z')
  SphericalPoly,    // sum_i b_i [P(z)^T P(z')]^i
  RBF,              // exp(-||z - z'||^2 / 2)
  RBFOnSphere,      // exp(-||P(z) - P(z')||^2 / 2)
};

std::string_view to_string(KernelFamily family);
KernelFamily parse_kernel_family(std::string_view name);

/// Largest explicit polynomial feature block, (D+1)^m, that will be built.
inline constexpr double kMaxMaterializedRank = 1e6;

struct KernelSpec {
  KernelFamily family = KernelFamily::SphericalLinear;
  /// Polynomial order m (SphericalPoly); linear families use 1.
  int order = 1;
  /// Unconstrained coefficients w; softmax(w) gives b_0..b_m. A -inf entry
  /// pins its coefficient to exactly zero.
  Vector raw_coefficients;
  SphericalMapKind map_kind = SphericalMapKind::InverseStereographic;
  ScalingConfig scaling;

  static KernelSpec standard_linear(int dim);
  static KernelSpec spherical_linear(int dim,
                                     SphericalMapKind map = SphericalMapKind::InverseStereographic);
  static KernelSpec spherical_poly(int dim, int order);
  static KernelSpec rbf(int dim);
  static KernelSpec rbf_on_sphere(int dim);

  int input_dim() const { return scaling.dim(); }

  /// Number of simplex coefficients (0 for the RBF families).
  int num_coefficients() const;

  /// softmax(raw_coefficients).
  Vector coefficients() const;

  /// The spherical map, with gamma derived from the current scaling. The
  /// standard linear family always uses the identity map.
  SphericalMap map() const;

  bool finite_rank() const;

  /// Throws InvalidArgument on inconsistent fields.
  void validate() const;
};

/// Numerically stable softmax; -inf entries map to exactly zero.
Vector softmax(const Eigen::Ref<const Vector>& w);

/// The point a kernel works with: P(z) for the spherical families, z otherwise.
Vector embed(const KernelSpec& spec, const Eigen::Ref<const Vector>& x);

/// Rows of X embedded; X is n x D with one search point per row.
Matrix embed_rows(const KernelSpec& spec, const Eigen::Ref<const Matrix>& x);

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Vector>& x,
                   const Eigen::Ref<const Vector>& x2);

/// Kernel value from two embeddings (see embed()).
double kernel_from_embeddings(const KernelSpec& spec, const Vector& coefficients,
                              const Eigen::Ref<const Vector>& e1,
                              const Eigen::Ref<const Vector>& e2);

/// n x m cross-covariance between the rows of `a` and the rows of `b`.
Matrix gram(const KernelSpec& spec, const Eigen::Ref<const Matrix>& a,
            const Eigen::Ref<const Matrix>& b);
Matrix gram(const KernelSpec& spec, const Eigen::Ref<const Matrix>& x);

/// Length of feature_map() for a finite-rank spec. Throws
/// RankTooLargeToMaterialize for polynomial orders whose tensor blocks
/// would exceed kMaxMaterializedRank.
std::size_t feature_dim(const KernelSpec& spec);

/// Explicit features whose dot products reproduce kernel_eval():
/// [sqrt(b_0), sqrt(b_1) e, sqrt(b_2) vec(e (x) e), ...] with e = embed(x).
Vector feature_map(const KernelSpec& spec, const Eigen::Ref<const Vector>& x);

/// feature_map() of each row of X, as an n x F matrix.
Matrix feature_rows(const KernelSpec& spec, const Eigen::Ref<const Matrix>& x);

/// Truncated Taylor series sum_{i=0}^{K} s^i / (i! e) of the RBF kernel
/// between two unit vectors with inner product s.
double rbf_on_sphere_taylor(double s, int truncation);

}  // namespace spherebo
