#include "cgmos/baselines.hpp"

#include "cgmos/error.hpp"
#include "cgmos/log.hpp"
#include "cgmos/neighbors.hpp"
#include "cgmos/rng.hpp"

namespace cgmos {
namespace {

constexpr std::uint64_t kDupTag = 0x64757020;  // "dup "

void require_interpolation(const Dataset& d, std::size_t k) {
    if (k < 1) fail(ErrorKind::Parameter, "k must be >= 1");
    if (d.count(Label::Minority) <= k) {
        fail(ErrorKind::InfeasibleSynthesis, "need more than k=" + std::to_string(k) + " minority samples, have " +
                                                 std::to_string(d.count(Label::Minority)));
    }
}

std::size_t majority_among_neighbors(const Dataset& d, std::size_t i, std::size_t k) {
    std::size_t count = 0;
    for (const auto& nb : nearest_neighbors(d.features(), d.row(i), k, {}, i)) {
        if (d.label(nb.index) == Label::Majority) ++count;
    }
    return count;
}

}  // namespace

std::string_view to_string(BaselineMethod m) noexcept {
    switch (m) {
        case BaselineMethod::Dup: return "dup";
        case BaselineMethod::Smote: return "smote";
        case BaselineMethod::BorderlineSmote: return "borderline_smote";
        case BaselineMethod::Adasyn: return "adasyn";
    }
    return "unknown";
}

Oversampled dup_oversample(const Dataset& d, std::size_t n, std::uint64_t rng_seed) {
    const auto minority = d.partition().minority_indices;
    if (minority.empty()) fail(ErrorKind::DegenerateDataset, "no minority samples to duplicate");
    Rng rng = Rng::stream(rng_seed, {kDupTag});
    Matrix rows(n, d.dims());
    std::vector<std::size_t> seeds;
    seeds.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t s = minority[static_cast<std::size_t>(rng.uniform_index(minority.size()))];
        const auto from = d.row(s);
        std::copy(from.begin(), from.end(), rows.row(r).begin());
        seeds.push_back(s);
    }
    return {d.with_appended(rows, Label::Minority), uniform_table(d, SeedPool::MinorityOnly), std::move(seeds)};
}

Oversampled smote_oversample(const Dataset& d, std::size_t n, std::size_t k, std::uint64_t rng_seed) {
    require_interpolation(d, k);
    return oversample_with_table(d, uniform_table(d, SeedPool::MinorityOnly), n, k, rng_seed);
}

std::vector<std::size_t> danger_set(const Dataset& d, std::size_t k_danger) {
    if (k_danger < 1 || k_danger > d.size() - 1) fail(ErrorKind::Parameter, "k_danger must be in [1, n-1]");
    std::vector<std::size_t> danger;
    const double half = static_cast<double>(k_danger) / 2.0;
    for (auto i : d.partition().minority_indices) {
        const std::size_t majority = majority_among_neighbors(d, i, k_danger);
        if (static_cast<double>(majority) >= half && majority < k_danger) danger.push_back(i);
    }
    return danger;
}

Oversampled borderline_smote_oversample(const Dataset& d, std::size_t n, std::size_t k, std::size_t k_danger,
                                        std::uint64_t rng_seed) {
    require_interpolation(d, k);
    const auto danger = danger_set(d, k_danger);
    if (danger.empty()) {
        warn("borderline-SMOTE found no DANGER samples; falling back to SMOTE");
        return smote_oversample(d, n, k, rng_seed);
    }
    std::vector<double> w(d.size(), 0.0);
    for (auto i : danger) w[i] = 1.0;
    return oversample_with_table(d, WeightTable::from_weights(std::move(w)), n, k, rng_seed);
}

std::vector<double> adasyn_ratios(const Dataset& d, std::size_t k) {
    if (k < 1 || k > d.size() - 1) fail(ErrorKind::Parameter, "k must be in [1, n-1]");
    std::vector<double> r(d.size(), 0.0);
    for (auto i : d.partition().minority_indices) {
        r[i] = static_cast<double>(majority_among_neighbors(d, i, k)) / static_cast<double>(k);
    }
    return r;
}

Oversampled adasyn_oversample(const Dataset& d, std::size_t n, std::size_t k, std::uint64_t rng_seed) {
    require_interpolation(d, k);
    auto r = adasyn_ratios(d, k);
    bool any = false;
    for (double v : r) any = any || v > 0.0;
    if (!any) {
        warn("ADASYN ratios are all zero; falling back to uniform minority seeds");
        return oversample_with_table(d, uniform_table(d, SeedPool::MinorityOnly), n, k, rng_seed);
    }
    return oversample_with_table(d, WeightTable::from_weights(std::move(r)), n, k, rng_seed);
}

Oversampled run_baseline(const Dataset& d, const BaselineConfig& cfg) {
    switch (cfg.method) {
        case BaselineMethod::Dup: return dup_oversample(d, cfg.n_synthetic, cfg.rng_seed);
        case BaselineMethod::Smote: return smote_oversample(d, cfg.n_synthetic, cfg.k_interp, cfg.rng_seed);
        case BaselineMethod::BorderlineSmote:
            return borderline_smote_oversample(d, cfg.n_synthetic, cfg.k_interp, cfg.k_danger, cfg.rng_seed);
        case BaselineMethod::Adasyn: return adasyn_oversample(d, cfg.n_synthetic, cfg.k_interp, cfg.rng_seed);
    }
    fail(ErrorKind::Parameter, "unknown baseline method");
}

}  // namespace cgmos
