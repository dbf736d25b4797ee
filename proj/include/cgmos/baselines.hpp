#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "cgmos/dataset.hpp"
#include "cgmos/oversampler.hpp"

namespace cgmos {

enum class BaselineMethod { Dup, Smote, BorderlineSmote, Adasyn };

struct BaselineConfig {
    BaselineMethod method = BaselineMethod::Smote;
    std::size_t n_synthetic = 0;
    std::size_t k_interp = 5;
    std::size_t k_danger = 5;
    std::uint64_t rng_seed = 0;
};

/// Random duplication of minority rows.
Oversampled dup_oversample(const Dataset& d, std::size_t n, std::uint64_t rng_seed);

/// Uniform minority seeds, minority-neighbour interpolation.
Oversampled smote_oversample(const Dataset& d, std::size_t n, std::size_t k, std::uint64_t rng_seed);

/// Borderline-SMOTE (variant 1): seeds restricted to minority samples whose
/// k_danger neighbourhood is at least half but not entirely majority.
Oversampled borderline_smote_oversample(const Dataset& d, std::size_t n, std::size_t k,
                                        std::size_t k_danger, std::uint64_t rng_seed);

/// ADASYN with an externally supplied synthesis count: seeds drawn in
/// proportion to the majority fraction of each minority sample's k-NN.
Oversampled adasyn_oversample(const Dataset& d, std::size_t n, std::size_t k, std::uint64_t rng_seed);

Oversampled run_baseline(const Dataset& d, const BaselineConfig& cfg);

/// Indices of minority samples in the borderline-SMOTE DANGER set.
std::vector<std::size_t> danger_set(const Dataset& d, std::size_t k_danger);

/// Majority fraction among each minority sample's k nearest neighbours
/// (indexed like the dataset; 0 for majority rows).
std::vector<double> adasyn_ratios(const Dataset& d, std::size_t k);

std::string_view to_string(BaselineMethod m) noexcept;

}  // namespace cgmos
