#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cgmos/dataset.hpp"
#include "cgmos/density.hpp"

namespace cgmos {

/// Which samples may act as interpolation seeds.
enum class SeedPool { AllSamples, MinorityOnly };

/// How seeds are weighted. Uniform turns the pipeline into plain SMOTE.
enum class SeedWeighting { Certainty, Uniform };

struct SynthesisConfig {
    std::size_t n_synthetic = 0;
    std::size_t k_interp = 5;
    /// Recompute weights every ceil(n_synthetic / 10) additions.
    bool refresh_weights = false;
    SeedPool seed_pool = SeedPool::AllSamples;
    SeedWeighting weighting = SeedWeighting::Certainty;
    std::uint64_t rng_seed = 0;
};

/// Seed-selection weights and the normalized distribution they induce.
struct WeightTable {
    std::vector<double> weights;
    double normalizer = 0.0;
    std::vector<double> probabilities;
    /// All weights in the pool were zero and the distribution fell back to uniform.
    bool uniform_fallback = false;

    std::size_t size() const noexcept { return weights.size(); }

    /// Normalizes `weights`. If they sum to zero, probabilities become uniform
    /// over `pool` (or over every entry when pool is empty).
    static WeightTable from_weights(std::vector<double> weights,
                                    std::span<const std::size_t> pool = {});
};

/// Weight 1 on every pool member, 0 elsewhere.
WeightTable uniform_table(const Dataset& d, SeedPool pool);

struct SyntheticBatch {
    Matrix points;
    std::vector<std::size_t> seed_indices;
    std::vector<std::size_t> partner_indices;
    /// Interpolation coefficient u in [0, 1) per point.
    std::vector<double> gaps;

    std::size_t size() const noexcept { return seed_indices.size(); }
};

/// Entry-wise (after - before) / before.
std::vector<double> relative_certainty_change(const CertaintyProfile& before,
                                              const CertaintyProfile& after);

/// Weight of x_i = 1 + mean over j of the relative certainty change of sample j; samples
/// outside the pool get weight 0. Cost O(n^2 m).
WeightTable compute_weights(const DensityModel& model, SeedPool pool = SeedPool::AllSamples);

/// i.i.d. inverse-CDF draws with replacement from table.probabilities.
std::vector<std::size_t> draw_seeds(const WeightTable& table, std::size_t count, std::uint64_t rng_seed);

/// One synthetic minority point per seed: x_s + u (x_v - x_s), with v drawn
/// uniformly from the k_interp nearest minority neighbours of x_s (x_s itself
/// excluded) and u ~ U[0, 1).
SyntheticBatch synthesize(const Dataset& d, std::span<const std::size_t> seeds, std::size_t k_interp,
                          std::uint64_t rng_seed);

struct Oversampled {
    Dataset data;
    /// Table used for the last seed draw.
    WeightTable weights;
    std::vector<std::size_t> seeds;
};

/// Seeds drawn from an explicit table, interpolated, appended as minority.
Oversampled oversample_with_table(const Dataset& d, const WeightTable& table, std::size_t n_synthetic,
                                  std::size_t k_interp, std::uint64_t rng_seed);

/// Full pipeline: fit density, weight once, draw, interpolate, append.
Oversampled oversample(const Dataset& d, const SynthesisConfig& cfg, const DensityParams& density = {});

}  // namespace cgmos
