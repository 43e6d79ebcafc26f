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

#include <array>
#include <cstdint>

#include "spherebo/numerics.hpp"

namespace spherebo {

/// Counter-based random stream (Philox4x32-10). The output depends only on
/// (seed, stream id, position), so sequences are reproducible across
/// platforms and independent substreams can be split off without sharing
/// state.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64();

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi);

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via Box-Muller.
  double normal();
  Vector normal_vector(Eigen::Index n);
  Vector uniform_vector(Eigen::Index n, double lo, double hi);

  /// A child stream keyed by this stream's seed and `id`; does not advance
  /// this stream.
  RandomStream split(std::uint64_t id) const;

  std::uint64_t seed() const { return seed_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::array<std::uint32_t, 2> key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int block_pos_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

inline RandomStream seeded_rng(std::uint64_t seed) { return RandomStream(seed); }

/// SplitMix64 finalizer; used for key derivation and content hashing.
std::uint64_t mix64(std::uint64_t x);

}  // namespace spherebo
