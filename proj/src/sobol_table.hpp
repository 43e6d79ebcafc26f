#pragma once

#include <cstdint>

namespace spherebo::detail {

inline constexpr int kSobolMaxDim = 21201;

/// Primitive polynomials, leading and trailing bits included.
extern const std::uint32_t kSobolPoly[kSobolMaxDim];

/// Initial direction numbers m_1..m_s per dimension, concatenated; dimension
/// d contributes max(degree(poly[d]), 1) entries.
extern const std::uint32_t kSobolInit[];

}  // namespace spherebo::detail
