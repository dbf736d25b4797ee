#pragma once

#include <cstddef>
#include <span>

namespace cgmos {

enum class WilcoxonMethod { Auto, Exact, Normal };

/// Pairs with a nonzero difference required.
inline constexpr std::size_t kWilcoxonMinPairs = 5;
/// Auto uses the exact null distribution up to this many nonzero pairs.
inline constexpr std::size_t kWilcoxonExactLimit = 20;

struct WilcoxonResult {
    /// Rank sums of positive and negative differences (a - b).
    double w_plus = 0.0;
    double w_minus = 0.0;
    /// min(w_plus, w_minus).
    double statistic = 0.0;
    std::size_t n = 0;
    double p_value = 1.0;
    bool exact = false;
};

/// Two-sided Wilcoxon signed-rank test. Zero differences are dropped and tied
/// magnitudes get average ranks. The exact path enumerates the null
/// distribution of the signed rank sum; the normal path applies the tie
/// variance correction and a 0.5 continuity correction.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    WilcoxonMethod method = WilcoxonMethod::Auto);

}  // namespace cgmos
