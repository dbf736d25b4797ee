#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "cgmos/baselines.hpp"
#include "cgmos/error.hpp"
#include "cgmos/log.hpp"
#include "oracles.hpp"

using namespace cgmos;

namespace {

constexpr Label J = Label::Majority;
constexpr Label N = Label::Minority;

Dataset points_2d(const std::vector<std::pair<double, double>>& p, const std::vector<Label>& y) {
    Matrix x(p.size(), 2);
    for (std::size_t i = 0; i < p.size(); ++i) {
        x(i, 0) = p[i].first;
        x(i, 1) = p[i].second;
    }
    return Dataset(std::move(x), y);
}

std::vector<double> row_of(const Dataset& d, std::size_t i) { return {d.row(i).begin(), d.row(i).end()}; }

/// Majority count among k nearest neighbours (all classes, self excluded), by sorting.
std::size_t oracle_majority(const Dataset& d, std::size_t i, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> c;
    for (std::size_t j = 0; j < d.size(); ++j) {
        if (j != i) c.emplace_back(oracle::distance(row_of(d, i), row_of(d, j)), j);
    }
    std::sort(c.begin(), c.end());
    std::size_t m = 0;
    for (std::size_t t = 0; t < k; ++t) m += d.label(c[t].second) == J;
    return m;
}

struct Silence {
    WarningHandler prev = set_warning_handler([](std::string_view) {});
    ~Silence() { set_warning_handler(prev); }
};

}  // namespace

TEST(Dup, ZeroIsIdentityAndRowsAreCopies) {
    auto d = make_two_gaussian_fixture(50, 12, 2.0, 3);
    EXPECT_EQ(dup_oversample(d, 0, 1).data, d);
    auto out = dup_oversample(d, static_cast<std::size_t>(d.gap()), 1).data;
    EXPECT_EQ(out.count(N), out.count(J));
    std::multiset<std::vector<double>> originals;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.label(i) == N) originals.insert(row_of(d, i));
    }
    for (std::size_t i = d.size(); i < out.size(); ++i) {
        EXPECT_EQ(out.label(i), N);
        EXPECT_TRUE(originals.count(row_of(out, i)));
    }
}

TEST(Smote, EqualsCgmosWithUniformMinorityWeights) {
    auto d = make_two_gaussian_fixture(80, 20, 2.0, 3);
    auto a = smote_oversample(d, 37, 5, 11);
    auto b = oversample(d, {.n_synthetic = 37, .k_interp = 5, .seed_pool = SeedPool::MinorityOnly,
                            .weighting = SeedWeighting::Uniform, .rng_seed = 11});
    EXPECT_EQ(a.data, b.data);
    EXPECT_EQ(a.seeds, b.seeds);
}

TEST(Smote, BalancesAndStaysInHull) {
    auto d = make_two_gaussian_fixture(80, 20, 2.0, 3);
    auto out = smote_oversample(d, 60, 5, 2).data;
    EXPECT_EQ(out.count(N), out.count(J));
    double lo[2] = {1e9, 1e9}, hi[2] = {-1e9, -1e9};
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.label(i) != N) continue;
        for (int c = 0; c < 2; ++c) {
            lo[c] = std::min(lo[c], d.features()(i, c));
            hi[c] = std::max(hi[c], d.features()(i, c));
        }
    }
    for (std::size_t i = d.size(); i < out.size(); ++i) {
        for (int c = 0; c < 2; ++c) {
            EXPECT_GE(out.features()(i, c), lo[c]);
            EXPECT_LE(out.features()(i, c), hi[c]);
        }
    }
}

TEST(Smote, TooFewMinority) {
    auto d = make_two_gaussian_fixture(20, 5, 2.0, 3);
    try {
        smote_oversample(d, 3, 5, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InfeasibleSynthesis);
    }
}

TEST(Borderline, NoiseAndSafeSamplesAreNeverSeeds) {
    // Minority 0 sits among majority (noise), minority 1..4 form a safe cluster,
    // minority 5 straddles the majority group.
    auto d = points_2d({{10, 10},
                        {0, 0}, {0, 0.1}, {0.1, 0}, {0.1, 0.1},
                        {10.4, 10},
                        {10, 10.1}, {10.1, 10}, {10.1, 10.1}, {9.9, 10}, {10, 9.9},
                        {10.5, 10.5}, {20, 20}, {21, 20}},
                       {N, N, N, N, N, N, J, J, J, J, J, J, J, J});
    const auto danger = danger_set(d, 3);
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.label(i) != N) continue;
        const auto m = oracle_majority(d, i, 3);
        const bool expected = 2 * m >= 3 && m < 3;
        EXPECT_EQ(std::count(danger.begin(), danger.end(), i) == 1, expected) << i;
    }
    EXPECT_EQ(std::count(danger.begin(), danger.end(), 0u), 0);
    EXPECT_EQ(std::count(danger.begin(), danger.end(), 1u), 0);
    EXPECT_EQ(std::count(danger.begin(), danger.end(), 5u), 1);
    auto out = borderline_smote_oversample(d, 50, 2, 3, 7);
    for (auto s : out.seeds) EXPECT_EQ(s, 5u);
}

TEST(Borderline, FallsBackToSmoteWhenNoDanger) {
    Silence quiet;
    auto d = points_2d({{0, 0}, {0, 1}, {1, 0}, {1, 1}, {9, 9}, {9, 10}, {10, 9}, {10, 10}, {9.5, 9.5}},
                       {N, N, N, N, J, J, J, J, J});
    EXPECT_TRUE(danger_set(d, 3).empty());
    EXPECT_EQ(borderline_smote_oversample(d, 10, 2, 3, 4).data, smote_oversample(d, 10, 2, 4).data);
}

TEST(Borderline, FixtureSeedsLieInBoundaryBand) {
    auto d = make_two_gaussian_fixture();
    auto model = DensityModel::fit(d);
    const auto c = model.certainty_profile();
    auto out = borderline_smote_oversample(d, 500, 5, 5, 3);
    for (auto s : out.seeds) EXPECT_LT(c[s], 0.8) << s;
    double mean = 0;
    for (auto s : out.seeds) mean += c[s] / out.seeds.size();
    EXPECT_LT(mean, 0.5);
}

TEST(Adasyn, UniformFallbackWhenAllSafe) {
    Silence quiet;
    auto d = points_2d({{0, 0}, {0, 1}, {1, 0}, {1, 1}, {9, 9}, {9, 10}, {10, 9}, {10, 10}, {9.5, 9.5}},
                       {N, N, N, N, J, J, J, J, J});
    auto out = adasyn_oversample(d, 10, 2, 4);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(out.weights.probabilities[i], 0.25);
}

TEST(Adasyn, PointMassSeedsEverything) {
    auto d = points_2d({{0, 0}, {0, 1}, {1, 0}, {1, 1}, {9.8, 9.8}, {9, 9}, {9, 10}, {10, 9}, {10, 10}},
                       {N, N, N, N, N, J, J, J, J});
    const auto r = adasyn_ratios(d, 3);
    EXPECT_EQ(r[4], 1.0);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(r[i], 0.0);
    for (auto s : adasyn_oversample(d, 40, 2, 1).seeds) EXPECT_EQ(s, 4u);
}

TEST(Adasyn, SeedFrequenciesFollowRatios) {
    auto d = make_two_gaussian_fixture(150, 40, 1.5, 12);
    const auto r = adasyn_ratios(d, 5);
    double total = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.label(i) == N) EXPECT_EQ(r[i], static_cast<double>(oracle_majority(d, i, 5)) / 5.0);
        total += r[i];
    }
    const std::size_t draws = 100000;
    auto out = adasyn_oversample(d, draws, 5, 8);
    std::map<std::size_t, double> freq;
    for (auto s : out.seeds) freq[s] += 1.0 / draws;
    for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(freq[i], r[i] / total, 0.01);
}

TEST(Baselines, PreserveShapeLabelsAndReproducibility) {
    auto d = make_two_gaussian_fixture(90, 25, 1.5, 2);
    for (auto m : {BaselineMethod::Dup, BaselineMethod::Smote, BaselineMethod::BorderlineSmote, BaselineMethod::Adasyn}) {
        BaselineConfig cfg{m, 40, 5, 5, 17};
        auto a = run_baseline(d, cfg);
        auto b = run_baseline(d, cfg);
        EXPECT_EQ(a.data, b.data) << to_string(m);
        EXPECT_EQ(a.data.size(), d.size() + 40);
        EXPECT_EQ(a.data.dims(), d.dims());
        for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(row_of(a.data, i), row_of(d, i));
        for (std::size_t i = d.size(); i < a.data.size(); ++i) EXPECT_EQ(a.data.label(i), N);
    }
}
