#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cgmos/dataset.hpp"
#include "cgmos/density.hpp"
#include "cgmos/oversampler.hpp"

namespace cgmos::theory {

/// For each sample j: posterior of its own label after adding a minority point at x_i, divided by the posterior before,
/// evaluated directly from class likelihoods and priors. Shares only the
/// fitted kernel sums with the density module; the what-if and relative
/// change code paths are not used.
std::vector<double> addition_likelihood_ratio(const DensityModel& model, std::size_t i);

/// Mean of the ratios.
double average_gain(std::span<const double> ratios);

struct ExpectedGains {
    /// sum_i gain_i W_i / z
    double e_p = 0.0;
    /// mean_i gain_i
    double e_s = 0.0;
    /// sum_i W_i^2 / z
    double e_p_closed = 0.0;
    /// z / n
    double e_s_closed = 0.0;
};

ExpectedGains expected_gains(const WeightTable& table, std::span<const double> gains);

struct SquareSumBound {
    bool precondition_ok = true;
    bool holds = true;
    /// sum W^2 - z^2 / n
    double margin = 0.0;
    std::string message;
};

/// Cauchy-Schwarz bound sum W^2 >= z^2 / n for nonnegative weights.
SquareSumBound verify_square_sum_bound(std::span<const double> weights);

inline constexpr double kRatioIdentityTolerance = 1e-12;
inline constexpr double kGainWeightTolerance = 1e-10;
inline constexpr double kExpectedGainTolerance = 1e-12;
inline constexpr double kFormTolerance = 1e-10;
/// Relative spread (max - min) / mean above which weights count as non-constant.
inline constexpr double kConstantWeightSpread = 1e-6;

enum class Fault { None, UniformWeights, NegativeWeight };

struct GainReport {
    std::vector<double> weights;
    std::vector<double> gains;
    ExpectedGains expected;
    double ratio_residual = 0.0;
    double gain_weight_residual = 0.0;
    double form_residual = 0.0;
    SquareSumBound square_sum;
    bool weights_constant = false;
    std::size_t zero_weights = 0;
};

/// Weights via the relative-change path, gains via the likelihood-ratio path,
/// and every cross-check between them.
GainReport analyze(const DensityModel& model, Fault fault = Fault::None);

struct DatasetCheck {
    std::string name;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t n_minority = 0;
    GainReport report;
    bool gain_bound_holds = false;
    bool strict_when_required = false;
    bool equality = false;
    std::vector<std::string> failures;
};

struct SuiteOptions {
    std::size_t n_datasets = 100;
    std::uint64_t seed = 20160101;
    bool include_fixture = true;
    DensityParams density{};
    Fault fault = Fault::None;
};

struct Certificate {
    std::vector<DatasetCheck> checks;
    double max_ratio_residual = 0.0;
    double max_gain_weight_residual = 0.0;
    double max_form_residual = 0.0;
    /// Names of every failed property, deduplicated, in first-seen order.
    std::vector<std::string> failed_properties;

    bool passed() const noexcept { return failed_properties.empty(); }
};

/// Random binary Gaussian-mixture dataset for the property corpus:
/// n in [10, 200], m in [1, 5], imbalance ratio in [0.05, 0.9].
Dataset random_corpus_dataset(std::uint64_t seed, std::size_t index);

DatasetCheck check_dataset(const std::string& name, const Dataset& d, const DensityParams& density,
                           Fault fault = Fault::None);

Certificate run_suite(const SuiteOptions& options);

}  // namespace cgmos::theory
