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
#include <optional>
#include <vector>

#include "spherebo/numerics.hpp"

namespace spherebo {

inline constexpr int kSobolMaxDimension = 21201;

/// Gray-code Sobol generator with Joe-Kuo direction numbers and 32-bit
/// resolution. With a scramble seed the direction numbers receive a random
/// linear matrix scramble plus a digital shift (Matousek-style Owen
/// approximation).
class SobolStream {
 public:
  explicit SobolStream(int dimension,
                       std::optional<std::uint64_t> scramble_seed = std::nullopt);

  int dimension() const { return dimension_; }
  std::uint64_t index() const { return index_; }

  /// Next point in [0,1)^D.
  Vector next_unit();

  /// Next point affinely rescaled to [-1,1]^D.
  Vector next_centered();

  /// Repositions the stream so the next point returned is point `index`.
  void skip_to(std::uint64_t index);

 private:
  int dimension_;
  std::uint64_t index_ = 0;
  // directions_[d * kBits + j]
  std::vector<std::uint32_t> directions_;
  std::vector<std::uint32_t> shift_;
  std::vector<std::uint32_t> state_;
};

/// n points in [-1,1]^D. Throws DimensionTooLarge above the table limit.
std::vector<Vector> sobol_points(int dimension, int n,
                                 std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace spherebo
