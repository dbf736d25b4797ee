#include "cgmos/neighbors.hpp"

#include <algorithm>
#include <cmath>

namespace cgmos {

std::vector<Neighbor> nearest_neighbors(const Matrix& points, std::span<const double> query, std::size_t k,
                                        std::span<const std::size_t> candidates, std::size_t exclude) {
    std::vector<Neighbor> pool;
    auto consider = [&](std::size_t idx) {
        if (idx == exclude) return;
        pool.push_back({idx, squared_distance(points.row(idx), query)});
    };
    if (candidates.empty()) {
        pool.reserve(points.rows());
        for (std::size_t i = 0; i < points.rows(); ++i) consider(i);
    } else {
        pool.reserve(candidates.size());
        for (auto i : candidates) consider(i);
    }

    auto closer = [](const Neighbor& a, const Neighbor& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
    };
    const std::size_t take = std::min(k, pool.size());
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take), pool.end(), closer);
    pool.resize(take);
    for (auto& nb : pool) nb.distance = std::sqrt(nb.distance);
    return pool;
}

}  // namespace cgmos
