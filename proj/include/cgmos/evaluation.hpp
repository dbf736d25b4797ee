#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cgmos/classifiers.hpp"
#include "cgmos/dataset.hpp"
#include "cgmos/density.hpp"
#include "cgmos/metrics.hpp"
#include "cgmos/oversampler.hpp"

namespace cgmos {

enum class Method { None, Dup, Smote, BorderlineSmote, Adasyn, Cgmos };

std::string_view to_string(Method m) noexcept;
/// Accepts the CLI spellings: none, dup, smote, borderline_smote (or bsmote), adasyn, cgmos.
std::optional<Method> parse_method(std::string_view s) noexcept;

struct OversamplerSpec {
    Method method = Method::Cgmos;
    /// Fixed amount; when unset the amount is round(k_factor * gap) of the
    /// dataset being oversampled (the training fold under cross-validation).
    std::optional<std::size_t> n_synthetic;
    double k_factor = 1.0;
    std::size_t k_interp = 5;
    std::size_t k_danger = 5;
    DensityParams density{};
    SeedPool seed_pool = SeedPool::AllSamples;
    bool refresh_weights = false;
};

std::size_t resolve_amount(const OversamplerSpec& spec, const Dataset& d);

/// Dispatches to CGMOS or a baseline. Method::None returns `d` unchanged.
Oversampled apply_oversampler(const Dataset& d, const OversamplerSpec& spec, std::uint64_t rng_seed);

struct FoldRecord {
    std::size_t round = 0;
    std::size_t fold = 0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::size_t n_synthetic = 0;
    /// Train/test rows are disjoint and the oversampled training set starts
    /// with the training rows unchanged.
    bool leakage_checked = false;
    bool failed = false;
    std::string failure;
    double auc = 0.0;
    ClassMetrics minority;
    ClassMetrics majority;
    /// Original-dataset rows scored in this fold, with their scores.
    std::vector<std::size_t> test_rows;
    std::vector<double> scores;
};

struct EvaluationReport {
    std::string method;
    std::string classifier;
    /// Means over all non-failed rounds x folds.
    double auc = 0.0;
    ClassMetrics minority;
    ClassMetrics majority;
    std::size_t failed_folds = 0;
    std::size_t undefined_metrics = 0;
    /// ROC of all out-of-fold scores pooled across rounds.
    RocCurve roc;
    std::vector<FoldRecord> folds;

    std::vector<double> fold_aucs() const;
};

/// Repeated stratified cross-validation. Each fold oversamples its training
/// part only, trains, and scores the untouched test part. Metrics are computed
/// once with the minority and once with the majority as the positive class.
/// Fold RNG streams derive from (master_seed, round, fold). A leakage-guard
/// violation throws ErrorKind::Verification instead of failing the fold.
EvaluationReport cross_validate(const Dataset& d, const OversamplerSpec& oversampler,
                                const ClassifierParams& classifier, const FoldPlan& plan,
                                std::uint64_t master_seed);

struct SweepRow {
    Method method;
    double k;
    double mean_auc;
    std::size_t failed_folds;
};

std::vector<double> default_k_grid();

/// For each method and k, cross-validate with round(k * gap) synthetic samples
/// per training fold. `base` supplies every other oversampler setting.
std::vector<SweepRow> sweep_k_delta(const Dataset& d, std::span<const Method> methods,
                                    const ClassifierParams& classifier, std::span<const double> k_values,
                                    const FoldPlan& plan, std::uint64_t master_seed,
                                    const OversamplerSpec& base = {});

}  // namespace cgmos
