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

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "spherebo/errors.hpp"
#include "spherebo/kernels.hpp"
#include "spherebo/rng.hpp"

using namespace spherebo;

namespace {

// Inverse stereographic coordinates written out independently of the library.
Vector stereo(const Vector& z) {
  const double r2 = z.squaredNorm();
  Vector u(z.size() + 1);
  for (Eigen::Index i = 0; i < z.size(); ++i) u[i] = 2.0 * z[i] / (r2 + 1.0);
  u[z.size()] = (r2 - 1.0) / (r2 + 1.0);
  return u;
}

KernelSpec with_unit_scaling(KernelSpec s) {
  s.scaling = ScalingConfig::unit(s.input_dim());
  return s;
}

std::vector<KernelSpec> all_specs(int d, RandomStream& rng) {
  std::vector<KernelSpec> specs = {
      KernelSpec::standard_linear(d),
      KernelSpec::spherical_linear(d),
      KernelSpec::spherical_linear(d, SphericalMapKind::Radial),
      KernelSpec::spherical_linear(d, SphericalMapKind::Normalization),
      KernelSpec::spherical_linear(d, SphericalMapKind::Homogeneous),
      KernelSpec::spherical_linear(d, SphericalMapKind::CoSine),
      KernelSpec::spherical_poly(d, 3),
      KernelSpec::rbf(d),
      KernelSpec::rbf_on_sphere(d),
  };
  for (auto& s : specs) {
    for (Eigen::Index i = 0; i < s.raw_coefficients.size(); ++i) s.raw_coefficients[i] = rng.normal();
    for (int i = 0; i < d; ++i) s.scaling.ard_lengthscales[i] = std::exp(rng.uniform(-1, 1));
  }
  return specs;
}

}  // namespace

TEST_CASE("softmax lies on the simplex and pins -inf entries") {
  RandomStream rng(1);
  for (int k = 0; k < 100; ++k) {
    const Vector w = rng.normal_vector(1 + static_cast<int>(rng.below(6))) * 5.0;
    const Vector b = softmax(w);
    CHECK(std::abs(b.sum() - 1.0) < 1e-12);
    CHECK(b.minCoeff() > 0.0);
  }
  Vector w(2);
  w << -std::numeric_limits<double>::infinity(), 0.3;
  const Vector b = softmax(w);
  CHECK(b[0] == 0.0);
  CHECK(b[1] == 1.0);
}

TEST_CASE("spherical kernels have unit diagonal") {
  RandomStream rng(2);
  for (int k = 0; k < 50; ++k) {
    const int d = 1 + static_cast<int>(rng.below(30));
    KernelSpec lin = KernelSpec::spherical_linear(d);
    lin.raw_coefficients = rng.normal_vector(2);
    KernelSpec poly = KernelSpec::spherical_poly(d, 1 + static_cast<int>(rng.below(4)));
    poly.raw_coefficients = rng.normal_vector(poly.num_coefficients());
    const Vector x = rng.uniform_vector(d, -1, 1);
    CHECK(kernel_eval(lin, x, x) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(kernel_eval(poly, x, x) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("standard linear hand values") {
  KernelSpec s = with_unit_scaling(KernelSpec::standard_linear(2));
  s.raw_coefficients << -std::numeric_limits<double>::infinity(), 0.0;
  const Vector e1 = Vector::Unit(2, 0);
  CHECK(kernel_eval(s, e1, e1) == 1.0);

  s.raw_coefficients << 0.0, 0.0;  // b0 = b1 = 1/2
  const Vector x = Vector::Ones(2);
  const Vector phi = feature_map(s, x);
  REQUIRE(phi.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(phi[i] == doctest::Approx(std::sqrt(0.5)));
  CHECK(phi.squaredNorm() == doctest::Approx(1.5));
  CHECK(kernel_eval(s, x, x) == doctest::Approx(1.5));
}

TEST_CASE("spherical linear features at the origin") {
  KernelSpec s = with_unit_scaling(KernelSpec::spherical_linear(2));
  s.raw_coefficients << 0.2, -0.4;
  const Vector b = softmax(s.raw_coefficients);
  const Vector phi = feature_map(s, Vector::Zero(2));
  REQUIRE(phi.size() == 4);
  CHECK(phi[0] == doctest::Approx(std::sqrt(b[0])));
  CHECK(phi[1] == 0.0);
  CHECK(phi[2] == 0.0);
  CHECK(phi[3] == doctest::Approx(-std::sqrt(b[1])));
}

TEST_CASE("spherical poly equals the coefficient series in s") {
  RandomStream rng(3);
  for (int k = 0; k < 50; ++k) {
    const int d = 1 + static_cast<int>(rng.below(10));
    KernelSpec s = with_unit_scaling(KernelSpec::spherical_poly(d, 3));
    s.raw_coefficients = rng.normal_vector(4);
    const Vector x = rng.uniform_vector(d, -1, 1), y = rng.uniform_vector(d, -1, 1);
    const double sv = stereo(x).dot(stereo(y));
    const Vector b = softmax(s.raw_coefficients);
    const double expected = b[0] + b[1] * sv + b[2] * sv * sv + b[3] * sv * sv * sv;
    CHECK(kernel_eval(s, x, y) == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("spherical kernels depend on the pair only through s") {
  // Rotating both preimages by the same orthogonal map keeps ||z||, ||z'||
  // and z.z', hence s, fixed.
  RandomStream rng(4);
  const int d = 6;
  KernelSpec lin = with_unit_scaling(KernelSpec::spherical_linear(d));
  lin.raw_coefficients << 0.3, 0.1;
  KernelSpec poly = with_unit_scaling(KernelSpec::spherical_poly(d, 2));
  poly.raw_coefficients << 0.1, -0.5, 0.4;
  for (int k = 0; k < 20; ++k) {
    const Vector x = rng.uniform_vector(d, -0.4, 0.4), y = rng.uniform_vector(d, -0.4, 0.4);
    Matrix g(d, d);
    for (int i = 0; i < d; ++i) g.col(i) = rng.normal_vector(d);
    const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
    const Vector xr = q * x, yr = q * y;
    CHECK(stereo(x).dot(stereo(y)) == doctest::Approx(stereo(xr).dot(stereo(yr))));
    CHECK(kernel_eval(lin, x, y) == doctest::Approx(kernel_eval(lin, xr, yr)).epsilon(1e-12));
    CHECK(kernel_eval(poly, x, y) == doctest::Approx(kernel_eval(poly, xr, yr)).epsilon(1e-12));
  }
}

TEST_CASE("feature dot products reproduce the kernel") {
  RandomStream rng(5);
  for (auto family : {0, 1, 2}) {
    for (int k = 0; k < 20; ++k) {
      const int d = family == 2 ? 1 + static_cast<int>(rng.below(8)) : 60;
      KernelSpec s = family == 0   ? KernelSpec::standard_linear(d)
                     : family == 1 ? KernelSpec::spherical_linear(d)
                                   : KernelSpec::spherical_poly(d, 3);
      s.raw_coefficients = rng.normal_vector(s.num_coefficients());
      for (int i = 0; i < d; ++i) s.scaling.ard_lengthscales[i] = std::exp(rng.uniform(-1, 1));
      const Vector x = rng.uniform_vector(d, -1, 1), y = rng.uniform_vector(d, -1, 1);
      CHECK(std::abs(feature_map(s, x).dot(feature_map(s, y)) - kernel_eval(s, x, y)) < 1e-10);
    }
  }
}

TEST_CASE("feature dimensions and materialization limit") {
  CHECK(feature_dim(KernelSpec::spherical_linear(5)) == 7);
  CHECK(feature_dim(KernelSpec::standard_linear(5)) == 6);
  // 1 + E + E^2 with E = 6.
  CHECK(feature_dim(KernelSpec::spherical_poly(5, 2)) == 43);
  CHECK_THROWS_AS(feature_dim(KernelSpec::spherical_poly(1000, 2)), Error);
  try {
    feature_dim(KernelSpec::rbf(3));
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RankTooLargeToMaterialize);
  }
}

TEST_CASE("rbf taylor series") {
  CHECK(rbf_on_sphere_taylor(0.0, 0) == doctest::Approx(1.0 / std::numbers::e));
  CHECK(rbf_on_sphere_taylor(0.0, 0) == doctest::Approx(0.36788).epsilon(1e-5));
  CHECK(rbf_on_sphere_taylor(1.0, 40) == doctest::Approx(1.0).epsilon(1e-15));
  RandomStream rng(6);
  for (int k = 0; k < 1000; ++k) {
    const int d = 1 + static_cast<int>(rng.below(100));
    const Vector u = rng.normal_vector(d).normalized(), v = rng.normal_vector(d).normalized();
    // ||u - v||^2 = 2 - 2s on the sphere.
    const double s = u.dot(v);
    CHECK(std::abs(std::exp(-(1.0 - s)) - rbf_on_sphere_taylor(s, 30)) < 1e-12);
  }
}

TEST_CASE("rbf on sphere agrees with the truncated series") {
  RandomStream rng(7);
  KernelSpec s = KernelSpec::rbf_on_sphere(20);
  for (int k = 0; k < 1000; ++k) {
    const Vector x = rng.uniform_vector(20, -1, 1), y = rng.uniform_vector(20, -1, 1);
    const double sv = embed(s, x).dot(embed(s, y));
    CHECK(std::abs(kernel_eval(s, x, y) - rbf_on_sphere_taylor(sv, 30)) < 1e-10);
  }
}

TEST_CASE("gram matrices are symmetric PSD for every family") {
  RandomStream rng(8);
  for (int k = 0; k < 20; ++k) {
    const int d = 1 + static_cast<int>(rng.below(100));
    const int n = 1 + static_cast<int>(rng.below(40));
    Matrix x(n, d);
    for (int i = 0; i < n; ++i) x.row(i) = rng.uniform_vector(d, -1, 1).transpose();
    for (const KernelSpec& s : all_specs(d, rng)) {
      if (s.family == KernelFamily::SphericalPoly && d > 60) continue;
      const Matrix k = gram(s, x);
      CHECK((k - k.transpose()).norm() == 0.0);
      const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(k).eigenvalues().minCoeff();
      CHECK(min_eig > -1e-8);
      // Cross gram agrees with pointwise evaluation.
      CHECK(k(0, n - 1) == doctest::Approx(kernel_eval(s, x.row(0).transpose(),
                                                       x.row(n - 1).transpose())));
    }
  }
}

TEST_CASE("kernel family names round-trip") {
  for (auto f : {KernelFamily::StandardLinear, KernelFamily::SphericalLinear,
                 KernelFamily::SphericalPoly, KernelFamily::RBF, KernelFamily::RBFOnSphere}) {
    CHECK(parse_kernel_family(to_string(f)) == f);
  }
  CHECK_THROWS_AS(parse_kernel_family("Matern"), Error);
}
