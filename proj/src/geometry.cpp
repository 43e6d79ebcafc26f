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

#include "spherebo/geometry.hpp"

#include <fmt/format.h>

#include <cmath>

#include "spherebo/errors.hpp"

namespace spherebo {

ScalingConfig ScalingConfig::dimension_scaled(int dim, bool centered) {
  return ScalingConfig{std::sqrt(dim / 3.0), Vector::Ones(dim), centered};
}

ScalingConfig ScalingConfig::unit(int dim, bool centered) {
  return ScalingConfig{1.0, Vector::Ones(dim), centered};
}

void ScalingConfig::validate() const {
  if (!(global_lengthscale > 0.0) || !std::isfinite(global_lengthscale)) {
    throw Error(ErrorKind::InvalidArgument,
                "scaling: global lengthscale must be positive and finite");
  }
  if (ard_lengthscales.size() == 0) {
    throw Error(ErrorKind::InvalidArgument, "scaling: empty lengthscale vector");
  }
  if (!ard_lengthscales.allFinite() || !(ard_lengthscales.minCoeff() > 0.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "scaling: ARD lengthscales must be positive and finite");
  }
}

double ScalingConfig::max_scaled_norm() const {
  return (1.0 / (global_lengthscale * ard_lengthscales.array())).matrix().norm();
}

Vector to_model_coordinates(const Eigen::Ref<const Vector>& x,
                            const ScalingConfig& cfg) {
  if (cfg.centered) return x;
  return ((x.array() + 1.0) * 0.5).matrix();
}

Vector scale(const Eigen::Ref<const Vector>& x, const ScalingConfig& cfg) {
  if (x.size() != cfg.ard_lengthscales.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("scale: point has {} coordinates, config has {}",
                            x.size(), cfg.ard_lengthscales.size()));
  }
  return (x.array() / (cfg.global_lengthscale * cfg.ard_lengthscales.array()))
      .matrix();
}

std::string_view to_string(SphericalMapKind kind) {
  switch (kind) {
    case SphericalMapKind::InverseStereographic: return "InverseStereographic";
    case SphericalMapKind::Radial: return "Radial";
    case SphericalMapKind::Normalization: return "Normalization";
    case SphericalMapKind::Homogeneous: return "Homogeneous";
    case SphericalMapKind::CoSine: return "CoSine";
    case SphericalMapKind::None: return "None";
  }
  return "None";
}

SphericalMapKind parse_spherical_map(std::string_view name) {
  for (auto kind : {SphericalMapKind::InverseStereographic, SphericalMapKind::Radial,
                    SphericalMapKind::Normalization, SphericalMapKind::Homogeneous,
                    SphericalMapKind::CoSine, SphericalMapKind::None}) {
    if (to_string(kind) == name) return kind;
  }
  throw Error(ErrorKind::InvalidConfig,
              fmt::format("unknown spherical map '{}'", name));
}

SphericalMap SphericalMap::for_scaling(SphericalMapKind kind,
                                       const ScalingConfig& cfg) {
  return SphericalMap{kind, cfg.max_scaled_norm()};
}

int SphericalMap::output_dim(int input_dim) const {
  switch (kind) {
    case SphericalMapKind::InverseStereographic:
    case SphericalMapKind::Radial:
      return input_dim + 1;
    case SphericalMapKind::Homogeneous:
    case SphericalMapKind::CoSine:
      return 2 * input_dim;
    case SphericalMapKind::Normalization:
    case SphericalMapKind::None:
      return input_dim;
  }
  return input_dim;
}

bool SphericalMap::is_spherical() const {
  return kind != SphericalMapKind::None && kind != SphericalMapKind::Homogeneous;
}

Vector map_to_sphere(const Eigen::Ref<const Vector>& z, const SphericalMap& map) {
  const auto d = z.size();
  const double sq = z.squaredNorm();
  switch (map.kind) {
    case SphericalMapKind::InverseStereographic: {
      Vector u(d + 1);
      const double inv = 1.0 / (sq + 1.0);
      u.head(d) = (2.0 * inv) * z;
      u[d] = (sq - 1.0) * inv;
      return u;
    }
    case SphericalMapKind::Radial: {
      const double g2 = map.gamma * map.gamma;
      // Admit rounding at the box corners, where ||z|| equals gamma.
      if (sq > g2 * (1.0 + 1e-12)) {
        throw Error(ErrorKind::NormExceedsGamma,
                    fmt::format("radial map: ||z|| = {} exceeds gamma = {}",
                                std::sqrt(sq), map.gamma));
      }
      Vector u(d + 1);
      u.head(d) = z / map.gamma;
      u[d] = std::sqrt(std::max(g2 - sq, 0.0)) / map.gamma;
      return u;
    }
    case SphericalMapKind::Normalization: {
      if (sq == 0.0) {
        throw Error(ErrorKind::ZeroVectorUnmappable,
                    "normalization map undefined at z = 0");
      }
      return z / std::sqrt(sq);
    }
    case SphericalMapKind::Homogeneous: {
      Vector u(2 * d);
      const double denom = std::sqrt(sq) + static_cast<double>(d) * map.gamma;
      u.head(d) = z / denom;
      u.tail(d).setConstant(map.gamma / denom);
      return u;
    }
    case SphericalMapKind::CoSine: {
      if (sq == 0.0) {
        throw Error(ErrorKind::ZeroVectorUnmappable, "cosine map undefined at z = 0");
      }
      const double r = std::sqrt(sq);
      Vector u(2 * d);
      u.head(d) = (std::cos(r) / r) * z;
      u.tail(d) = (std::sin(r) / r) * z;
      return u;
    }
    case SphericalMapKind::None:
      return z;
  }
  return z;
}

Vector unmap_from_sphere(const Eigen::Ref<const Vector>& u, const SphericalMap& map) {
  if (map.kind != SphericalMapKind::InverseStereographic) {
    throw Error(ErrorKind::UnsupportedVariant,
                fmt::format("no inverse for the {} map", to_string(map.kind)));
  }
  if (u.size() < 2) {
    throw Error(ErrorKind::DimensionMismatch, "unmap: sphere point too short");
  }
  const auto d = u.size() - 1;
  if (u[d] == 1.0) {
    throw Error(ErrorKind::NorthPoleSingularity, "unmap: north pole has no preimage");
  }
  if (u[d] > 0.0) {
    // 1 - u_{D+1} = ||u_{1:D}||^2 / (1 + u_{D+1}) on the sphere, which avoids
    // cancellation near the north pole.
    const double head_sq = u.head(d).squaredNorm();
    if (head_sq == 0.0) {
      throw Error(ErrorKind::NorthPoleSingularity, "unmap: north pole has no preimage");
    }
    return u.head(d) * ((1.0 + u[d]) / head_sq);
  }
  return u.head(d) / (1.0 - u[d]);
}

}  // namespace spherebo
