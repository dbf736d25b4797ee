#include "cgmos/oversampler.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "cgmos/error.hpp"
#include "cgmos/log.hpp"
#include "cgmos/neighbors.hpp"
#include "cgmos/rng.hpp"

namespace cgmos {
namespace {

constexpr std::uint64_t kDrawTag = 0x64726177;   // "draw"
constexpr std::uint64_t kSynthTag = 0x73796e74;  // "synt"
constexpr std::uint64_t kChunkTag = 0x63686e6b;  // "chnk"

std::vector<std::size_t> pool_indices(const Dataset& d, SeedPool pool) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (pool == SeedPool::AllSamples || d.label(i) == Label::Minority) idx.push_back(i);
    }
    return idx;
}

}  // namespace

WeightTable WeightTable::from_weights(std::vector<double> weights, std::span<const std::size_t> pool) {
    WeightTable t;
    t.weights = std::move(weights);
    for (double w : t.weights) {
        if (!(w >= 0.0)) fail(ErrorKind::Parameter, "seed weights must be nonnegative and finite");
    }
    t.normalizer = std::accumulate(t.weights.begin(), t.weights.end(), 0.0);
    t.probabilities.assign(t.weights.size(), 0.0);
    if (t.normalizer > 0.0) {
        for (std::size_t i = 0; i < t.weights.size(); ++i) t.probabilities[i] = t.weights[i] / t.normalizer;
        return t;
    }
    t.uniform_fallback = true;
    if (t.weights.empty()) return t;
    warn("all seed weights are zero; falling back to uniform seed selection");
    if (pool.empty()) {
        std::fill(t.probabilities.begin(), t.probabilities.end(), 1.0 / static_cast<double>(t.weights.size()));
    } else {
        for (auto i : pool) t.probabilities.at(i) = 1.0 / static_cast<double>(pool.size());
    }
    return t;
}

WeightTable uniform_table(const Dataset& d, SeedPool pool) {
    std::vector<double> w(d.size(), 0.0);
    for (auto i : pool_indices(d, pool)) w[i] = 1.0;
    return WeightTable::from_weights(std::move(w));
}

std::vector<double> relative_certainty_change(const CertaintyProfile& before, const CertaintyProfile& after) {
    if (before.size() != after.size()) fail(ErrorKind::DimensionMismatch, "certainty profiles differ in length");
    std::vector<double> r(before.size());
    for (std::size_t j = 0; j < before.size(); ++j) {
        if (!(before[j] > 0.0)) {
            fail(ErrorKind::DivisionGuard, "zero baseline certainty at sample " + std::to_string(j));
        }
        r[j] = (after[j] - before[j]) / before[j];
    }
    return r;
}

WeightTable compute_weights(const DensityModel& model, SeedPool pool) {
    const Dataset& d = model.data();
    const auto before = model.certainty_profile();
    const auto members = pool_indices(d, pool);
    const double n = static_cast<double>(d.size());

    std::vector<double> w(d.size(), 0.0);
    std::size_t zeros = 0;
    for (auto i : members) {
        const auto change = relative_certainty_change(before, model.insert_minority_whatif(i));
        double sum = 0.0;
        for (double r : change) sum += r;
        w[i] = 1.0 + sum / n;
        if (w[i] == 0.0) ++zeros;
    }
    if (zeros > 0) warn(std::to_string(zeros) + " CGMOS weight(s) are exactly zero");
    return WeightTable::from_weights(std::move(w), members);
}

std::vector<std::size_t> draw_seeds(const WeightTable& table, std::size_t count, std::uint64_t rng_seed) {
    std::vector<std::size_t> out;
    if (count == 0) return out;
    if (table.probabilities.empty()) fail(ErrorKind::Parameter, "cannot draw seeds from an empty table");

    std::vector<double> cumulative(table.probabilities.size());
    std::partial_sum(table.probabilities.begin(), table.probabilities.end(), cumulative.begin());
    const double total = cumulative.back();
    Rng rng = Rng::stream(rng_seed, {kDrawTag});
    out.reserve(count);

    if (!(total > 0.0)) {
        warn("seed distribution has no mass; drawing seeds uniformly");
        for (std::size_t c = 0; c < count; ++c) out.push_back(static_cast<std::size_t>(rng.uniform_index(cumulative.size())));
        return out;
    }

    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < table.probabilities.size(); ++i) {
        if (table.probabilities[i] > 0.0) last_positive = i;
    }
    for (std::size_t c = 0; c < count; ++c) {
        const double target = rng.uniform01() * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
        auto idx = static_cast<std::size_t>(it - cumulative.begin());
        out.push_back(std::min(idx, last_positive));
    }
    return out;
}

SyntheticBatch synthesize(const Dataset& d, std::span<const std::size_t> seeds, std::size_t k_interp,
                          std::uint64_t rng_seed) {
    if (k_interp < 1) fail(ErrorKind::Parameter, "k_interp must be >= 1");
    const auto minority = d.partition().minority_indices;

    SyntheticBatch batch;
    batch.points = Matrix(seeds.size(), d.dims());
    batch.seed_indices.assign(seeds.begin(), seeds.end());
    batch.partner_indices.reserve(seeds.size());
    batch.gaps.reserve(seeds.size());

    std::map<std::size_t, std::vector<Neighbor>> cache;
    Rng rng = Rng::stream(rng_seed, {kSynthTag});
    for (std::size_t p = 0; p < seeds.size(); ++p) {
        const std::size_t s = seeds[p];
        if (s >= d.size()) fail(ErrorKind::Parameter, "seed index out of range");
        auto found = cache.find(s);
        if (found == cache.end()) {
            auto nbrs = nearest_neighbors(d.features(), d.row(s), k_interp, minority, s);
            if (nbrs.size() < k_interp) {
                fail(ErrorKind::InfeasibleSynthesis,
                     "seed " + std::to_string(s) + " has " + std::to_string(nbrs.size()) +
                         " minority neighbours, k_interp=" + std::to_string(k_interp));
            }
            found = cache.emplace(s, std::move(nbrs)).first;
        }
        const auto& nbrs = found->second;
        const std::size_t v = nbrs[static_cast<std::size_t>(rng.uniform_index(nbrs.size()))].index;
        const double u = rng.uniform01();
        const auto xs = d.row(s);
        const auto xv = d.row(v);
        auto out = batch.points.row(p);
        for (std::size_t c = 0; c < d.dims(); ++c) out[c] = xs[c] + u * (xv[c] - xs[c]);
        batch.partner_indices.push_back(v);
        batch.gaps.push_back(u);
    }
    return batch;
}

Oversampled oversample_with_table(const Dataset& d, const WeightTable& table, std::size_t n_synthetic,
                                  std::size_t k_interp, std::uint64_t rng_seed) {
    if (table.size() != d.size()) fail(ErrorKind::DimensionMismatch, "weight table does not match dataset");
    auto seeds = draw_seeds(table, n_synthetic, rng_seed);
    auto batch = synthesize(d, seeds, k_interp, rng_seed);
    return {d.with_appended(batch.points, Label::Minority), table, std::move(seeds)};
}

namespace {

WeightTable seed_table(const Dataset& d, const SynthesisConfig& cfg, const DensityParams& density) {
    if (cfg.weighting == SeedWeighting::Uniform) return uniform_table(d, cfg.seed_pool);
    return compute_weights(DensityModel::fit(d, density), cfg.seed_pool);
}

}  // namespace

Oversampled oversample(const Dataset& d, const SynthesisConfig& cfg, const DensityParams& density) {
    if (cfg.k_interp < 1) fail(ErrorKind::Parameter, "k_interp must be >= 1");
    if (!cfg.refresh_weights || cfg.n_synthetic == 0) {
        return oversample_with_table(d, seed_table(d, cfg, density), cfg.n_synthetic, cfg.k_interp, cfg.rng_seed);
    }

    const std::size_t chunk = (cfg.n_synthetic + 9) / 10;
    Oversampled result{d, WeightTable{}, {}};
    std::size_t remaining = cfg.n_synthetic;
    for (std::uint64_t c = 0; remaining > 0; ++c) {
        const std::size_t take = std::min(chunk, remaining);
        auto table = seed_table(result.data, cfg, density);
        auto step = oversample_with_table(result.data, table, take, cfg.k_interp, derive_seed(cfg.rng_seed, {kChunkTag, c}));
        result.seeds.insert(result.seeds.end(), step.seeds.begin(), step.seeds.end());
        result.data = std::move(step.data);
        result.weights = std::move(step.weights);
        remaining -= take;
    }
    return result;
}

}  // namespace cgmos
