#include "cgmos/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "cgmos/error.hpp"

namespace cgmos {
namespace {

struct SignedRanks {
    std::vector<double> ranks;  // average ranks of |d|
    std::vector<bool> positive;
    double tie_term = 0.0;      // sum of t^3 - t over tie groups
};

SignedRanks rank_differences(const std::vector<double>& diffs) {
    const std::size_t n = diffs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(diffs[a]) < std::abs(diffs[b]); });
    SignedRanks sr;
    sr.ranks.resize(n);
    sr.positive.resize(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && std::abs(diffs[order[j]]) == std::abs(diffs[order[i]])) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) sr.ranks[order[k]] = avg;
        const double t = static_cast<double>(j - i);
        sr.tie_term += t * t * t - t;
        i = j;
    }
    for (std::size_t i = 0; i < n; ++i) sr.positive[i] = diffs[i] > 0.0;
    return sr;
}

/// Two-sided p from the exact null distribution of the signed rank sum.
/// Average ranks are multiples of 1/2, so doubled ranks are integers and the
/// distribution is a subset-sum count.
double exact_p(const SignedRanks& sr, double w_plus) {
    std::vector<std::int64_t> doubled;
    std::int64_t total = 0;
    for (double r : sr.ranks) {
        doubled.push_back(std::llround(2.0 * r));
        total += doubled.back();
    }
    std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
    ways[0] = 1.0;
    std::int64_t reach = 0;
    for (auto r : doubled) {
        for (std::int64_t s = reach; s >= 0; --s) {
            if (ways[static_cast<std::size_t>(s)] != 0.0) ways[static_cast<std::size_t>(s + r)] += ways[static_cast<std::size_t>(s)];
        }
        reach += r;
    }
    // 2 * |W - mean| in doubled units; total is n(n+1) so the doubled mean is total / 2.
    const std::int64_t observed = std::llround(2.0 * w_plus);
    const std::int64_t dev = std::llabs(2 * observed - total);
    double tail = 0.0;
    for (std::int64_t s = 0; s <= total; ++s) {
        if (std::llabs(2 * s - total) >= dev) tail += ways[static_cast<std::size_t>(s)];
    }
    const double p = tail / std::ldexp(1.0, static_cast<int>(sr.ranks.size()));
    return std::min(1.0, p);
}

double normal_p(const SignedRanks& sr, double w_plus) {
    const double n = static_cast<double>(sr.ranks.size());
    const double mean = n * (n + 1.0) / 4.0;
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - sr.tie_term / 48.0;
    if (!(var > 0.0)) return 1.0;
    const double dev = std::max(0.0, std::abs(w_plus - mean) - 0.5);
    return std::min(1.0, std::erfc(dev / std::sqrt(var) / std::sqrt(2.0)));
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b, WilcoxonMethod method) {
    if (a.size() != b.size()) fail(ErrorKind::DimensionMismatch, "paired samples differ in length");
    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (!std::isfinite(d)) fail(ErrorKind::Parameter, "non-finite paired difference");
        if (d != 0.0) diffs.push_back(d);
    }
    if (diffs.size() < kWilcoxonMinPairs) {
        fail(ErrorKind::InsufficientData, "Wilcoxon test needs at least " + std::to_string(kWilcoxonMinPairs) +
                                              " nonzero differences, got " + std::to_string(diffs.size()));
    }
    const auto sr = rank_differences(diffs);
    WilcoxonResult res;
    res.n = diffs.size();
    for (std::size_t i = 0; i < diffs.size(); ++i) (sr.positive[i] ? res.w_plus : res.w_minus) += sr.ranks[i];
    res.statistic = std::min(res.w_plus, res.w_minus);
    res.exact = method == WilcoxonMethod::Exact || (method == WilcoxonMethod::Auto && res.n <= kWilcoxonExactLimit);
    res.p_value = res.exact ? exact_p(sr, res.w_plus) : normal_p(sr, res.w_plus);
    return res;
}

}  // namespace cgmos
