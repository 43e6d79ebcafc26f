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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "spherebo/errors.hpp"
#include "spherebo/geometry.hpp"
#include "spherebo/rng.hpp"

using namespace spherebo;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

const SphericalMap kStereo{SphericalMapKind::InverseStereographic, 1.0};

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("scale: componentwise division") {
  ScalingConfig cfg{2.0, Vector::Ones(2), true};
  CHECK(scale(vec({1, -1}), cfg).isApprox(vec({0.5, -0.5})));
  CHECK(scale(Vector::Zero(2), cfg).norm() == 0.0);
  CHECK(kind_of([&] { scale(Vector::Zero(3), cfg); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("scale: dimension-scaled config gives E||z||^2 = 1") {
  const int d = 100;
  const ScalingConfig cfg = ScalingConfig::dimension_scaled(d);
  CHECK(cfg.global_lengthscale == doctest::Approx(std::sqrt(d / 3.0)));
  RandomStream rng(2);
  double total = 0.0;
  const int m = 20000;
  for (int i = 0; i < m; ++i) total += scale(rng.uniform_vector(d, -1, 1), cfg).squaredNorm();
  // Standard error sqrt(4/(5D)/m) = 6.3e-4.
  CHECK(std::abs(total / m - 1.0) < 4 * std::sqrt(0.8 / d / m));
}

TEST_CASE("scale: D=1 hand value") {
  const ScalingConfig cfg = ScalingConfig::dimension_scaled(1);
  // z = x / sqrt(1/3) so ||z||^2 = 3 x^2.
  CHECK(scale(vec({1.0}), cfg).squaredNorm() == doctest::Approx(3.0));
}

TEST_CASE("uncentered model coordinates map [-1,1] onto [0,1]") {
  ScalingConfig cfg = ScalingConfig::unit(2, false);
  CHECK(to_model_coordinates(vec({-1, 1}), cfg).isApprox(vec({0, 1})));
  cfg.centered = true;
  CHECK(to_model_coordinates(vec({-1, 1}), cfg).isApprox(vec({-1, 1})));
}

TEST_CASE("stereographic: south pole, equator, output length") {
  const Vector u = map_to_sphere(Vector::Zero(2), kStereo);
  CHECK(u.isApprox(vec({0, 0, -1})));
  RandomStream rng(4);
  for (int d : {1, 3, 60}) {
    const Vector z = rng.normal_vector(d).normalized();
    const Vector p = map_to_sphere(z, kStereo);
    REQUIRE(p.size() == d + 1);
    CHECK((p.head(d) - z).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK(std::abs(p[d]) < 1e-12);
  }
}

TEST_CASE("radial map with gamma 2") {
  const Vector u = map_to_sphere(vec({2, 0}), SphericalMap{SphericalMapKind::Radial, 2.0});
  // (1/gamma)[z, sqrt(gamma^2 - ||z||^2)] = (1, 0, 0)
  CHECK(u.isApprox(vec({1, 0, 0})));
  CHECK(u.norm() == doctest::Approx(1.0));
  CHECK(kind_of([] { map_to_sphere(vec({2, 1}), SphericalMap{SphericalMapKind::Radial, 2.0}); }) ==
        ErrorKind::NormExceedsGamma);
}

TEST_CASE("radial gamma covers the whole box") {
  ScalingConfig cfg = ScalingConfig::dimension_scaled(5);
  cfg.ard_lengthscales << 0.5, 1, 2, 3, 4;
  const SphericalMap map = SphericalMap::for_scaling(SphericalMapKind::Radial, cfg);
  const Vector corner = scale(Vector::Ones(5), cfg);
  CHECK(map.gamma == doctest::Approx(corner.norm()));
  CHECK(map_to_sphere(corner, map).norm() == doctest::Approx(1.0));
}

TEST_CASE("zero vector is unmappable for normalization and cosine") {
  CHECK(kind_of([] { map_to_sphere(Vector::Zero(3), SphericalMap{SphericalMapKind::Normalization, 1}); }) ==
        ErrorKind::ZeroVectorUnmappable);
  CHECK(kind_of([] { map_to_sphere(Vector::Zero(3), SphericalMap{SphericalMapKind::CoSine, 1}); }) ==
        ErrorKind::ZeroVectorUnmappable);
}

TEST_CASE("homogeneous map follows its formula") {
  // [z, gamma...gamma] / (||z|| + D gamma)
  const Vector u = map_to_sphere(vec({3, 4}), SphericalMap{SphericalMapKind::Homogeneous, 1.0});
  CHECK(u.isApprox(vec({3, 4, 1, 1}) / 7.0));
}

TEST_CASE("unit norm for every spherical variant") {
  RandomStream rng(8);
  for (int d : {2, 60, 500}) {
    ScalingConfig cfg = ScalingConfig::dimension_scaled(d);
    for (auto kind : {SphericalMapKind::InverseStereographic, SphericalMapKind::Radial,
                      SphericalMapKind::Normalization, SphericalMapKind::CoSine}) {
      const SphericalMap map = SphericalMap::for_scaling(kind, cfg);
      CHECK(map.is_spherical());
      for (int k = 0; k < 2500; ++k) {
        Vector z = kind == SphericalMapKind::Radial
                       ? scale(rng.uniform_vector(d, -1, 1), cfg)
                       : Vector(rng.normal_vector(d) * std::exp(rng.uniform(-3, 3)));
        const Vector u = map_to_sphere(z, map);
        CHECK(u.size() == map.output_dim(d));
        CHECK(std::abs(u.norm() - 1.0) < 1e-10);
      }
    }
  }
  CHECK_FALSE(SphericalMap{SphericalMapKind::Homogeneous, 1}.is_spherical());
  CHECK_FALSE(SphericalMap{SphericalMapKind::None, 1}.is_spherical());
}

TEST_CASE("stereographic inverse") {
  CHECK(unmap_from_sphere(vec({0, 0, -1}), kStereo).norm() == 0.0);
  RandomStream rng(5);
  const Vector e = rng.normal_vector(4).normalized();
  Vector u(5);
  u << e, 0.0;
  CHECK((unmap_from_sphere(u, kStereo) - e).norm() < 1e-12);

  for (int k = 0; k < 200; ++k) {
    const Vector z = rng.normal_vector(50) * std::exp(rng.uniform(-5, 3));
    const Vector back = unmap_from_sphere(map_to_sphere(z, kStereo), kStereo);
    CHECK((back - z).norm() <= 1e-10 * std::max(1.0, z.norm()));
  }
  // Round trip holds up to ||z|| = 1e3 in relative terms.
  for (double r : {1e-3, 1.0, 10.0, 1e3}) {
    const Vector z = rng.normal_vector(10).normalized() * r;
    const Vector back = unmap_from_sphere(map_to_sphere(z, kStereo), kStereo);
    CHECK((back - z).norm() / r < 1e-10);
  }
}

TEST_CASE("stereographic inverse errors") {
  CHECK(kind_of([] { unmap_from_sphere(vec({0, 0, 1}), kStereo); }) ==
        ErrorKind::NorthPoleSingularity);
  CHECK(kind_of([] {
          unmap_from_sphere(vec({0, 1}), SphericalMap{SphericalMapKind::Radial, 1.0});
        }) == ErrorKind::UnsupportedVariant);
}

TEST_CASE("stereographic projection is conformal on the unit sphere") {
  RandomStream rng(6);
  const double h = 1e-6;
  for (int k = 0; k < 50; ++k) {
    const int d = 2 + static_cast<int>(rng.below(6));
    const Vector z = rng.normal_vector(d).normalized();
    const Vector a = rng.normal_vector(d), b = rng.normal_vector(d);
    auto push = [&](const Vector& v) {
      return Vector((map_to_sphere(z + h * v, kStereo) - map_to_sphere(z - h * v, kStereo)) /
                    (2 * h));
    };
    const Vector pa = push(a), pb = push(b);
    const double before = a.dot(b) / (a.norm() * b.norm());
    const double after = pa.dot(pb) / (pa.norm() * pb.norm());
    CHECK(std::abs(before - after) < 1e-6);
  }
}

TEST_CASE("map names round-trip") {
  for (auto kind : {SphericalMapKind::InverseStereographic, SphericalMapKind::Radial,
                    SphericalMapKind::Normalization, SphericalMapKind::Homogeneous,
                    SphericalMapKind::CoSine, SphericalMapKind::None}) {
    CHECK(parse_spherical_map(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_spherical_map("Mercator"), Error);
}
