#include "cgmos/evaluation.hpp"

#include <cmath>

#include "cgmos/baselines.hpp"
#include "cgmos/error.hpp"
#include "cgmos/rng.hpp"

namespace cgmos {
namespace {

constexpr std::uint64_t kFoldTag = 0x63766664;  // "cvfd"

void accumulate(ClassMetrics& acc, const ClassMetrics& m) {
    acc.precision += m.precision;
    acc.recall += m.recall;
    acc.f_score += m.f_score;
    acc.g_score += m.g_score;
    acc.undefined += m.undefined;
}

void check_disjoint(std::size_t n, const std::vector<std::size_t>& train_rows, const std::vector<std::size_t>& test_rows) {
    std::vector<char> seen(n, 0);
    for (auto r : train_rows) seen[r] = 1;
    for (auto r : test_rows) {
        if (seen[r]) fail(ErrorKind::Verification, "test row " + std::to_string(r) + " also in the training fold");
    }
    if (train_rows.size() + test_rows.size() != n) fail(ErrorKind::Verification, "folds do not cover the dataset");
}

void check_prefix(const Dataset& train_set, const Dataset& resampled) {
    bool ok = resampled.size() >= train_set.size() && resampled.dims() == train_set.dims();
    for (std::size_t i = 0; ok && i < train_set.size(); ++i) {
        ok = resampled.label(i) == train_set.label(i);
        for (std::size_t c = 0; ok && c < train_set.dims(); ++c) ok = resampled.features()(i, c) == train_set.features()(i, c);
    }
    for (std::size_t i = train_set.size(); ok && i < resampled.size(); ++i) ok = resampled.label(i) == Label::Minority;
    if (!ok) fail(ErrorKind::Verification, "oversampling altered the training rows");
}

void divide(ClassMetrics& acc, double count) {
    acc.precision /= count;
    acc.recall /= count;
    acc.f_score /= count;
    acc.g_score /= count;
}

}  // namespace

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::None: return "none";
        case Method::Dup: return "dup";
        case Method::Smote: return "smote";
        case Method::BorderlineSmote: return "borderline_smote";
        case Method::Adasyn: return "adasyn";
        case Method::Cgmos: return "cgmos";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view s) noexcept {
    if (s == "none" || s == "original") return Method::None;
    if (s == "dup") return Method::Dup;
    if (s == "smote") return Method::Smote;
    if (s == "borderline_smote" || s == "bsmote" || s == "borderline-smote") return Method::BorderlineSmote;
    if (s == "adasyn") return Method::Adasyn;
    if (s == "cgmos") return Method::Cgmos;
    return std::nullopt;
}

std::size_t resolve_amount(const OversamplerSpec& spec, const Dataset& d) {
    if (spec.n_synthetic) return *spec.n_synthetic;
    if (!(spec.k_factor >= 0.0) || !std::isfinite(spec.k_factor)) fail(ErrorKind::Parameter, "k factor must be >= 0");
    const auto gap = d.gap();
    if (gap <= 0) return 0;
    return static_cast<std::size_t>(std::llround(spec.k_factor * static_cast<double>(gap)));
}

Oversampled apply_oversampler(const Dataset& d, const OversamplerSpec& spec, std::uint64_t rng_seed) {
    const std::size_t n = resolve_amount(spec, d);
    switch (spec.method) {
        case Method::None: return {d, uniform_table(d, SeedPool::MinorityOnly), {}};
        case Method::Dup: return dup_oversample(d, n, rng_seed);
        case Method::Smote: return smote_oversample(d, n, spec.k_interp, rng_seed);
        case Method::BorderlineSmote: return borderline_smote_oversample(d, n, spec.k_interp, spec.k_danger, rng_seed);
        case Method::Adasyn: return adasyn_oversample(d, n, spec.k_interp, rng_seed);
        case Method::Cgmos: {
            SynthesisConfig cfg;
            cfg.n_synthetic = n;
            cfg.k_interp = spec.k_interp;
            cfg.refresh_weights = spec.refresh_weights;
            cfg.seed_pool = spec.seed_pool;
            cfg.rng_seed = rng_seed;
            return oversample(d, cfg, spec.density);
        }
    }
    fail(ErrorKind::Parameter, "unknown oversampling method");
}

std::vector<double> EvaluationReport::fold_aucs() const {
    std::vector<double> out;
    for (const auto& f : folds) out.push_back(f.failed ? std::nan("") : f.auc);
    return out;
}

EvaluationReport cross_validate(const Dataset& d, const OversamplerSpec& oversampler,
                                const ClassifierParams& classifier, const FoldPlan& plan,
                                std::uint64_t master_seed) {
    if (plan.assignments.empty() || plan.assignments.front().size() != d.size()) {
        fail(ErrorKind::Parameter, "fold plan does not match the dataset");
    }
    EvaluationReport report;
    report.method = std::string(to_string(oversampler.method));
    report.classifier = std::string(to_string(classifier.kind));

    std::vector<Label> pooled_labels;
    std::vector<double> pooled_scores;
    std::size_t ok = 0;

    for (std::size_t r = 0; r < plan.rounds; ++r) {
        for (std::size_t f = 0; f < plan.folds; ++f) {
            FoldRecord rec;
            rec.round = r;
            rec.fold = f;
            const auto train_rows = plan.train_indices(r, f);
            rec.test_rows = plan.test_indices(r, f);
            rec.n_train = train_rows.size();
            rec.n_test = rec.test_rows.size();
            check_disjoint(d.size(), train_rows, rec.test_rows);
            try {
                const Dataset train_set = d.subset(train_rows);
                const auto fold_seed = derive_seed(master_seed, {kFoldTag, r, f});
                const auto resampled = apply_oversampler(train_set, oversampler, fold_seed);
                check_prefix(train_set, resampled.data);
                rec.leakage_checked = true;
                rec.n_synthetic = resampled.data.size() - train_set.size();
                const auto model = train(resampled.data, classifier);

                std::vector<Label> truth, predicted;
                for (auto row : rec.test_rows) {
                    const double s = model.score_minority(d.row(row));
                    rec.scores.push_back(s);
                    truth.push_back(d.label(row));
                    predicted.push_back(decide(s));
                }
                rec.minority = class_metrics(truth, predicted, Label::Minority);
                rec.majority = class_metrics(truth, predicted, Label::Majority);
                rec.auc = roc_auc(truth, rec.scores, Label::Minority).auc;
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::Verification) throw;
                rec.failed = true;
                rec.failure = std::string(to_string(e.kind())) + ": " + e.what();
            }
            if (rec.failed) {
                ++report.failed_folds;
            } else {
                ++ok;
                report.auc += rec.auc;
                accumulate(report.minority, rec.minority);
                accumulate(report.majority, rec.majority);
                for (std::size_t t = 0; t < rec.test_rows.size(); ++t) {
                    pooled_labels.push_back(d.label(rec.test_rows[t]));
                    pooled_scores.push_back(rec.scores[t]);
                }
            }
            report.folds.push_back(std::move(rec));
        }
    }
    if (ok > 0) {
        report.auc /= static_cast<double>(ok);
        divide(report.minority, static_cast<double>(ok));
        divide(report.majority, static_cast<double>(ok));
        report.roc = roc_auc(pooled_labels, pooled_scores, Label::Minority);
    }
    report.undefined_metrics = report.minority.undefined + report.majority.undefined;
    return report;
}

std::vector<double> default_k_grid() {
    std::vector<double> k;
    for (int i = 1; i <= 10; ++i) k.push_back(0.5 * i);
    return k;
}

std::vector<SweepRow> sweep_k_delta(const Dataset& d, std::span<const Method> methods,
                                    const ClassifierParams& classifier, std::span<const double> k_values,
                                    const FoldPlan& plan, std::uint64_t master_seed, const OversamplerSpec& base) {
    if (d.gap() <= 0) fail(ErrorKind::Parameter, "sweep needs more majority than minority samples");
    std::vector<SweepRow> rows;
    for (auto method : methods) {
        for (double k : k_values) {
            OversamplerSpec spec = base;
            spec.method = method;
            spec.n_synthetic.reset();
            spec.k_factor = k;
            const auto report = cross_validate(d, spec, classifier, plan, master_seed);
            rows.push_back({method, k, report.auc, report.failed_folds});
        }
    }
    return rows;
}

}  // namespace cgmos
