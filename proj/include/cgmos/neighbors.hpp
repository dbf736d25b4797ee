#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "cgmos/matrix.hpp"

namespace cgmos {

inline constexpr std::size_t kNoExclusion = std::numeric_limits<std::size_t>::max();

struct Neighbor {
    std::size_t index;
    double distance;
};

/// Brute-force k nearest rows of `points` to `query`, restricted to
/// `candidates` (all rows when empty) and skipping row `exclude`. Ordered by
/// (distance, index). Returns fewer than k when the pool is smaller.
std::vector<Neighbor> nearest_neighbors(const Matrix& points, std::span<const double> query, std::size_t k,
                                        std::span<const std::size_t> candidates = {},
                                        std::size_t exclude = kNoExclusion);

}  // namespace cgmos
