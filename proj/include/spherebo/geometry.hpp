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

#include <string_view>

#include "spherebo/numerics.hpp"

namespace spherebo {

/// Input scaling z_i = x_i / (a * l_i), with a the global lengthscale and l
/// the per-dimension (ARD) lengthscales.
struct ScalingConfig {
  double global_lengthscale = 1.0;
  Vector ard_lengthscales;
  /// Search space is [-1,1]^D when true. When false the model sees the
  /// same points as [0,1]^D coordinates, without any re-centering.
  bool centered = true;

  /// a = sqrt(D/3), l = 1: makes E||z||^2 = 1 for uniform x on [-1,1]^D.
  static ScalingConfig dimension_scaled(int dim, bool centered = true);
  static ScalingConfig unit(int dim, bool centered = true);

  int dim() const { return static_cast<int>(ard_lengthscales.size()); }

  /// Throws InvalidArgument unless a > 0 and every l_i > 0.
  void validate() const;

  /// sup of ||z|| over the model's hypercube.
  double max_scaled_norm() const;
};

/// Converts a point of the centered search box [-1,1]^D into the
/// coordinates the model sees: unchanged when centered, (x + 1) / 2 otherwise.
Vector to_model_coordinates(const Eigen::Ref<const Vector>& x,
                            const ScalingConfig& cfg);

/// z_i = x_i / (a * l_i) on model coordinates. Throws DimensionMismatch.
Vector scale(const Eigen::Ref<const Vector>& x, const ScalingConfig& cfg);

enum class SphericalMapKind {
  InverseStereographic,
  Radial,
  Normalization,
  Homogeneous,
  CoSine,
  None,
};

std::string_view to_string(SphericalMapKind kind);
SphericalMapKind parse_spherical_map(std::string_view name);

struct SphericalMap {
  SphericalMapKind kind = SphericalMapKind::InverseStereographic;
  /// Largest attainable ||z||; only Radial and Homogeneous read it.
  double gamma = 1.0;

  /// Builds a map whose gamma is the exact sup of ||z|| under `cfg`.
  static SphericalMap for_scaling(SphericalMapKind kind, const ScalingConfig& cfg);

  int output_dim(int input_dim) const;

  /// Whether outputs are unit norm.
  bool is_spherical() const;
};

/// Maps a scaled vector onto the sphere. Throws NormExceedsGamma (Radial)
/// and ZeroVectorUnmappable (Normalization, CoSine at z = 0).
Vector map_to_sphere(const Eigen::Ref<const Vector>& z, const SphericalMap& map);

/// Inverse of the stereographic map: z = u_{1:D} / (1 - u_{D+1}). Throws
/// UnsupportedVariant for other maps and NorthPoleSingularity at u_{D+1} = 1.
Vector unmap_from_sphere(const Eigen::Ref<const Vector>& u, const SphericalMap& map);

}  // namespace spherebo
