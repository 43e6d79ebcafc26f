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

#include "spherebo/sobol.hpp"

#include <fmt/format.h>

#include <bit>

#include "sobol_table.hpp"
#include "spherebo/errors.hpp"
#include "spherebo/rng.hpp"

namespace spherebo {
namespace {

constexpr int kBits = 32;

std::vector<std::size_t> init_offsets() {
  std::vector<std::size_t> offsets(detail::kSobolMaxDim + 1, 0);
  for (int d = 0; d < detail::kSobolMaxDim; ++d) {
    const int degree = std::max(static_cast<int>(std::bit_width(detail::kSobolPoly[d])) - 1, 1);
    offsets[d + 1] = offsets[d] + static_cast<std::size_t>(degree);
  }
  return offsets;
}

const std::vector<std::size_t>& offsets() {
  static const std::vector<std::size_t> table = init_offsets();
  return table;
}

// Direction numbers v_j (j = 0..31) for one dimension, left-aligned.
void fill_directions(int d, std::uint32_t* v) {
  if (d == 0) {
    for (int j = 0; j < kBits; ++j) v[j] = 1u << (kBits - 1 - j);
    return;
  }
  const std::uint32_t poly = detail::kSobolPoly[d];
  const int s = static_cast<int>(std::bit_width(poly)) - 1;
  const std::uint32_t* m = detail::kSobolInit + offsets()[d];
  std::uint32_t mk[kBits];
  for (int k = 0; k < s && k < kBits; ++k) mk[k] = m[k];
  for (int k = s; k < kBits; ++k) {
    std::uint32_t value = mk[k - s] ^ (mk[k - s] << s);
    for (int i = 1; i < s; ++i) {
      if ((poly >> (s - i)) & 1u) value ^= mk[k - i] << i;
    }
    mk[k] = value;
  }
  for (int k = 0; k < kBits; ++k) v[k] = mk[k] << (kBits - 1 - k);
}

// Random lower-triangular (MSB-first) binary matrix with unit diagonal,
// applied to every direction number of one dimension.
void scramble_directions(std::uint32_t* v, RandomStream& rng) {
  std::uint32_t rows[kBits];
  for (int k = 0; k < kBits; ++k) {
    const std::uint32_t own = 1u << (kBits - 1 - k);
    // Bits strictly more significant than `own`.
    const std::uint32_t above = k == 0 ? 0u : ~((own << 1) - 1u);
    rows[k] = own | (static_cast<std::uint32_t>(rng.next_u64()) & above);
  }
  for (int j = 0; j < kBits; ++j) {
    std::uint32_t out = 0;
    for (int k = 0; k < kBits; ++k) {
      if (std::popcount(rows[k] & v[j]) & 1) out |= 1u << (kBits - 1 - k);
    }
    v[j] = out;
  }
}

}  // namespace

SobolStream::SobolStream(int dimension, std::optional<std::uint64_t> scramble_seed)
    : dimension_(dimension) {
  if (dimension < 1) {
    throw Error(ErrorKind::InvalidArgument, "sobol: dimension must be >= 1");
  }
  if (dimension > kSobolMaxDimension) {
    throw Error(ErrorKind::DimensionTooLarge,
                fmt::format("sobol: dimension {} exceeds table limit {}",
                            dimension, kSobolMaxDimension));
  }
  directions_.resize(static_cast<std::size_t>(dimension) * kBits);
  shift_.assign(static_cast<std::size_t>(dimension), 0u);
  std::optional<RandomStream> rng;
  if (scramble_seed) rng.emplace(*scramble_seed, 0x50B01ull);
  for (int d = 0; d < dimension; ++d) {
    std::uint32_t* v = directions_.data() + static_cast<std::size_t>(d) * kBits;
    fill_directions(d, v);
    if (rng) {
      scramble_directions(v, *rng);
      shift_[d] = static_cast<std::uint32_t>(rng->next_u64());
    }
  }
  state_ = shift_;
}

void SobolStream::skip_to(std::uint64_t index) {
  index_ = index;
  const std::uint64_t gray = index ^ (index >> 1);
  for (int d = 0; d < dimension_; ++d) {
    const std::uint32_t* v = directions_.data() + static_cast<std::size_t>(d) * kBits;
    std::uint32_t x = shift_[d];
    for (int j = 0; j < kBits; ++j) {
      if ((gray >> j) & 1u) x ^= v[j];
    }
    state_[d] = x;
  }
}

Vector SobolStream::next_unit() {
  if (index_ >= (std::uint64_t{1} << kBits)) {
    throw Error(ErrorKind::InvalidArgument, "sobol: stream exhausted");
  }
  Vector out(dimension_);
  for (int d = 0; d < dimension_; ++d) {
    out[d] = static_cast<double>(state_[d]) * 0x1.0p-32;
  }
  // Advance by the direction number of the lowest zero bit of the index.
  const int c = std::countr_one(index_);
  if (c < kBits) {
    for (int d = 0; d < dimension_; ++d) {
      state_[d] ^= directions_[static_cast<std::size_t>(d) * kBits + c];
    }
  }
  ++index_;
  return out;
}

Vector SobolStream::next_centered() {
  return (2.0 * next_unit().array() - 1.0).matrix();
}

std::vector<Vector> sobol_points(int dimension, int n,
                                 std::optional<std::uint64_t> seed) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "sobol_points: n must be >= 1");
  SobolStream stream(dimension, seed);
  std::vector<Vector> points;
  points.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) points.push_back(stream.next_centered());
  return points;
}

}  // namespace spherebo
