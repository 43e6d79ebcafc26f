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

#include "doctest.h"
#include "spherebo/errors.hpp"
#include "spherebo/objectives.hpp"
#include "spherebo/rng.hpp"

using namespace spherebo;

TEST_CASE("every registered objective is deterministic and finite on the box") {
  RandomStream rng(1);
  for (const auto& id : objective_ids()) {
    for (int d : {2, 10, 60}) {
      const SyntheticObjective a = make_objective(id, d, 3);
      const SyntheticObjective b = make_objective(id, d, 3);
      CHECK(a.id() == id);
      CHECK(a.dim() == d);
      for (int k = 0; k < 50; ++k) {
        const Vector x = rng.uniform_vector(d, -1, 1);
        CHECK(std::isfinite(a(x)));
        CHECK(a(x) == b(x));
      }
      CHECK(std::isfinite(a(Vector::Ones(d))));
      CHECK(std::isfinite(a(-Vector::Ones(d))));
    }
  }
}

TEST_CASE("known optima are attained and not beaten by samples") {
  RandomStream rng(2);
  for (const auto& id : objective_ids()) {
    const SyntheticObjective f = make_objective(id, 8, 5);
    REQUIRE(f.known_optimum().has_value());
    REQUIRE(f.known_argmax().has_value());
    CHECK(f(*f.known_argmax()) == doctest::Approx(*f.known_optimum()).epsilon(1e-9));
    for (int k = 0; k < 2000; ++k) CHECK(f(rng.uniform_vector(8, -1, 1)) <= *f.known_optimum() + 1e-9);
  }
}

TEST_CASE("affine trend optimum is the sign corner") {
  const SyntheticObjective f = make_objective("affine_trend", 12, 7);
  const Vector& corner = *f.known_argmax();
  CHECK(corner.cwiseAbs().minCoeff() == 1.0);
  // Flipping any coordinate of the corner loses value.
  for (int i = 0; i < 12; ++i) {
    Vector y = corner;
    y[i] = -y[i];
    CHECK(f(y) < f(corner));
  }
}

TEST_CASE("instance seeds change the problem") {
  const Vector x = Vector::Constant(5, 0.3);
  CHECK(make_objective("centered_quadratic", 5, 1)(x) != make_objective("centered_quadratic", 5, 2)(x));
}

TEST_CASE("objective errors") {
  CHECK_THROWS_AS(make_objective("branin", 2), Error);
  CHECK_THROWS_AS(make_objective("levy", 0), Error);
  const SyntheticObjective f = make_objective("levy", 3);
  try {
    f(Vector::Zero(4));
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}
