#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "cgmos/error.hpp"
#include "cgmos/evaluation.hpp"
#include "cgmos/report.hpp"
#include "oracles.hpp"

using namespace cgmos;

namespace {

constexpr Label N = Label::Minority;

Dataset small_dataset() {
    Matrix x(20, 2);
    std::vector<Label> y(20, Label::Majority);
    for (std::size_t i = 0; i < 20; ++i) {
        x(i, 0) = std::sin(1.7 * i) * 3 + (i % 4 == 0 ? 1.5 : 0.0);
        x(i, 1) = std::cos(0.9 * i * i);
        if (i % 4 == 0) y[i] = N;
    }
    return Dataset(std::move(x), std::move(y));
}

/// Hand-computed knn score: minority fraction among the k closest training rows.
double knn_score(const Dataset& d, const std::vector<std::size_t>& train, std::size_t q, std::size_t k) {
    const auto x = oracle::rows(d);
    std::vector<std::pair<double, std::size_t>> c;
    for (std::size_t t = 0; t < train.size(); ++t) c.emplace_back(oracle::distance(x[q], x[train[t]]), t);
    std::sort(c.begin(), c.end());
    double votes = 0;
    for (std::size_t t = 0; t < k; ++t) votes += d.label(train[c[t].second]) == N;
    return votes / static_cast<double>(k);
}

}  // namespace

TEST(CrossValidate, NoOversamplingKnnMatchesHandComputation) {
    const auto d = small_dataset();
    const auto plan = stratified_folds(d, 2, 5, 3);
    OversamplerSpec none{.method = Method::None};
    ClassifierParams knn{.kind = ClassifierKind::Knn, .knn_k = 3};
    const auto report = cross_validate(d, none, knn, plan, 1);

    double auc = 0, precision = 0, recall = 0, maj_precision = 0;
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t f = 0; f < 5; ++f) {
            const auto train = plan.train_indices(r, f);
            const auto test = plan.test_indices(r, f);
            std::vector<int> pos;
            std::vector<double> s;
            double tp = 0, fp = 0, fn = 0, tn = 0;
            for (auto q : test) {
                const double score = knn_score(d, train, q, 3);
                pos.push_back(d.label(q) == N);
                s.push_back(score);
                const bool predicted = score > 0.5;
                const bool actual = d.label(q) == N;
                tp += predicted && actual;
                fp += predicted && !actual;
                fn += !predicted && actual;
                tn += !predicted && !actual;
            }
            auc += oracle::mann_whitney_auc(pos, s) / 10;
            precision += (tp + fp > 0 ? tp / (tp + fp) : 0.0) / 10;
            recall += tp / (tp + fn) / 10;
            maj_precision += (tn + fn > 0 ? tn / (tn + fn) : 0.0) / 10;
        }
    }
    EXPECT_NEAR(report.auc, auc, 1e-12);
    EXPECT_NEAR(report.minority.precision, precision, 1e-12);
    EXPECT_NEAR(report.minority.recall, recall, 1e-12);
    EXPECT_NEAR(report.majority.precision, maj_precision, 1e-12);
    EXPECT_EQ(report.failed_folds, 0u);
}

TEST(CrossValidate, IdenticalSeedsGiveIdenticalBytes) {
    const auto d = make_two_gaussian_fixture(80, 20, 2.0, 1);
    const auto plan = stratified_folds(d, 2, 5, 8);
    OversamplerSpec spec{.method = Method::Cgmos};
    const auto a = to_json(cross_validate(d, spec, {}, plan, 5)).dump();
    const auto b = to_json(cross_validate(d, spec, {}, plan, 5)).dump();
    EXPECT_EQ(a, b);
    EXPECT_NE(a, to_json(cross_validate(d, spec, {}, plan, 6)).dump());
}

TEST(CrossValidate, TestFoldsAreUntouchedOriginalRows) {
    const auto d = make_two_gaussian_fixture(60, 20, 1.5, 2);
    const auto plan = stratified_folds(d, 3, 4, 1);
    for (auto m : {Method::Cgmos, Method::Smote, Method::Dup, Method::Adasyn, Method::BorderlineSmote}) {
        const auto report = cross_validate(d, {.method = m}, {.kind = ClassifierKind::Knn}, plan, 2);
        for (std::size_t r = 0; r < 3; ++r) {
            std::multiset<std::size_t> rows;
            for (const auto& f : report.folds) {
                if (f.round != r) continue;
                EXPECT_TRUE(f.leakage_checked);
                EXPECT_EQ(f.n_train + f.n_test, d.size());
                EXPECT_EQ(f.n_synthetic, 30u);  // k=1: training gap 45 - 15
                rows.insert(f.test_rows.begin(), f.test_rows.end());
            }
            EXPECT_EQ(rows.size(), d.size());
            EXPECT_EQ(std::set<std::size_t>(rows.begin(), rows.end()).size(), d.size());
        }
    }
}

TEST(CrossValidate, InfeasibleFoldsAreRecordedAndExcluded) {
    const auto d = make_two_gaussian_fixture(60, 12, 1.5, 2);
    const auto plan = stratified_folds(d, 1, 3, 1);
    OversamplerSpec spec{.method = Method::Smote, .k_interp = 8};
    const auto report = cross_validate(d, spec, {.kind = ClassifierKind::Knn}, plan, 1);
    EXPECT_EQ(report.failed_folds, 3u);
    for (const auto& f : report.folds) {
        EXPECT_TRUE(f.failed);
        EXPECT_NE(f.failure.find("infeasible"), std::string::npos) << f.failure;
    }
    EXPECT_EQ(report.auc, 0.0);
}

TEST(CrossValidate, MetricsBounded) {
    const auto d = make_two_gaussian_fixture(60, 20, 1.5, 2);
    const auto report = cross_validate(d, {.method = Method::Cgmos}, {}, stratified_folds(d, 2, 5, 4), 9);
    for (const auto* m : {&report.minority, &report.majority}) {
        for (double v : {m->precision, m->recall, m->f_score, m->g_score}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
    EXPECT_GE(report.auc, 0.0);
    EXPECT_LE(report.auc, 1.0);
    EXPECT_EQ(report.folds.size(), 10u);
    EXPECT_EQ(report.roc.points.back().fpr, 1.0);
}

TEST(Amount, ResolvesFromGap) {
    const auto d = make_two_gaussian_fixture(50, 20, 1.5, 2);
    EXPECT_EQ(resolve_amount({.k_factor = 1.0}, d), 30u);
    EXPECT_EQ(resolve_amount({.k_factor = 0.5}, d), 15u);
    EXPECT_EQ(resolve_amount({.k_factor = 2.5}, d), 75u);
    EXPECT_EQ(resolve_amount({.n_synthetic = 7, .k_factor = 2.5}, d), 7u);
    EXPECT_THROW(resolve_amount({.k_factor = -1.0}, d), Error);
}

TEST(Sweep, DefaultGrid) {
    const auto g = default_k_grid();
    ASSERT_EQ(g.size(), 10u);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_DOUBLE_EQ(g[i], 0.5 * (i + 1));
}

TEST(Sweep, ZeroRowEqualsNoOversampling) {
    const auto d = make_two_gaussian_fixture(60, 15, 1.5, 2);
    const auto plan = stratified_folds(d, 2, 5, 4);
    const Method methods[] = {Method::Cgmos, Method::Smote};
    const double ks[] = {0.0, 1.0};
    const auto rows = sweep_k_delta(d, methods, {}, ks, plan, 3, {});
    ASSERT_EQ(rows.size(), 4u);
    const auto baseline = cross_validate(d, {.method = Method::None}, {}, plan, 3);
    EXPECT_EQ(rows[0].mean_auc, baseline.auc);
    EXPECT_EQ(rows[2].mean_auc, baseline.auc);
    EXPECT_EQ(rows[1].method, Method::Cgmos);
    EXPECT_EQ(rows[3].method, Method::Smote);
}

TEST(Sweep, NoGapIsAParameterError) {
    Matrix x(4, 1);
    for (int i = 0; i < 4; ++i) x(i, 0) = i;
    Dataset d(x, {N, N, Label::Majority, Label::Majority});
    const Method methods[] = {Method::Smote};
    const double ks[] = {1.0};
    EXPECT_THROW(sweep_k_delta(d, methods, {}, ks, stratified_folds(d, 1, 2, 1), 1, {}), Error);
}

TEST(Methods, ParseRoundTrip) {
    for (auto m : {Method::None, Method::Dup, Method::Smote, Method::BorderlineSmote, Method::Adasyn, Method::Cgmos}) {
        EXPECT_EQ(parse_method(to_string(m)), m);
    }
    EXPECT_FALSE(parse_method("mwmote").has_value());
}
