#include "cgmos/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cgmos/error.hpp"
#include "cgmos/rng.hpp"

namespace cgmos::theory {
namespace {

struct ClassTotals {
    double n_mjr;
    double n_mnr;
};

/// Posterior of `truth` from raw kernel sums and class sizes, by Bayes' rule
/// with priors n_l / n. Zero evidence resolves to the priors.
double posterior_of(Label truth, double sum_mjr, double sum_mnr, ClassTotals c) {
    const double n = c.n_mjr + c.n_mnr;
    const double p_mjr = (sum_mjr / c.n_mjr) * (c.n_mjr / n);
    const double p_mnr = (sum_mnr / c.n_mnr) * (c.n_mnr / n);
    const double evidence = p_mjr + p_mnr;
    if (!(evidence > 0.0)) return truth == Label::Minority ? c.n_mnr / n : c.n_mjr / n;
    return (truth == Label::Minority ? p_mnr : p_mjr) / evidence;
}

double gaussian(std::span<const double> x, std::span<const double> center, double h) {
    const double m = static_cast<double>(x.size());
    double d2 = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) d2 += (x[c] - center[c]) * (x[c] - center[c]);
    return std::pow(2.0 * std::numbers::pi, -m / 2.0) * std::pow(h, -m) * std::exp(-d2 / (2.0 * h * h));
}

bool nonconstant(std::span<const double> w) {
    if (w.empty()) return false;
    const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
    const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
    const double scale = std::max(std::abs(mean), 1e-300);
    return (*hi - *lo) / scale > kConstantWeightSpread;
}

void note_failure(std::vector<std::string>& list, const std::string& name) {
    if (std::find(list.begin(), list.end(), name) == list.end()) list.push_back(name);
}

}  // namespace

std::vector<double> addition_likelihood_ratio(const DensityModel& model, std::size_t i) {
    const Dataset& d = model.data();
    if (i >= d.size()) fail(ErrorKind::Parameter, "insertion index out of range");
    const ClassTotals before{static_cast<double>(d.count(Label::Majority)), static_cast<double>(d.count(Label::Minority))};
    const ClassTotals after{before.n_mjr, before.n_mnr + 1.0};
    const double h = model.bandwidth(i);

    std::vector<double> ratio(d.size());
    for (std::size_t j = 0; j < d.size(); ++j) {
        const double s_mjr = model.kernel_sum(j, Label::Majority);
        const double s_mnr = model.kernel_sum(j, Label::Minority);
        const double p_before = posterior_of(d.label(j), s_mjr, s_mnr, before);
        if (!(p_before > 0.0)) fail(ErrorKind::DivisionGuard, "zero posterior before insertion at sample " + std::to_string(j));
        const double p_after = posterior_of(d.label(j), s_mjr, s_mnr + gaussian(d.row(j), d.row(i), h), after);
        ratio[j] = p_after / p_before;
    }
    return ratio;
}

double average_gain(std::span<const double> ratios) {
    if (ratios.empty()) fail(ErrorKind::InsufficientData, "average gain of an empty ratio vector");
    double sum = 0.0;
    for (double r : ratios) sum += r;
    return sum / static_cast<double>(ratios.size());
}

ExpectedGains expected_gains(const WeightTable& table, std::span<const double> gains) {
    if (gains.size() != table.size()) fail(ErrorKind::DimensionMismatch, "gains and weights differ in length");
    if (gains.empty()) fail(ErrorKind::InsufficientData, "no gains");
    const double n = static_cast<double>(gains.size());
    const double z = table.normalizer;
    if (!(z > 0.0)) fail(ErrorKind::DivisionGuard, "weight normalizer is not positive");
    ExpectedGains e;
    double sq = 0.0;
    for (std::size_t i = 0; i < gains.size(); ++i) {
        e.e_p += gains[i] * (table.weights[i] / z);
        e.e_s += gains[i] / n;
        sq += table.weights[i] * table.weights[i];
    }
    e.e_p_closed = sq / z;
    e.e_s_closed = z / n;
    return e;
}

SquareSumBound verify_square_sum_bound(std::span<const double> weights) {
    SquareSumBound c;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] >= 0.0)) {
            c.precondition_ok = false;
            c.holds = false;
            c.message = "weight " + std::to_string(i) + " is negative or not finite";
            return c;
        }
    }
    double z = 0.0, sq = 0.0;
    for (double w : weights) {
        z += w;
        sq += w * w;
    }
    const double n = static_cast<double>(weights.size());
    c.margin = n > 0 ? sq - z * z / n : 0.0;
    c.holds = c.margin >= -kExpectedGainTolerance;
    if (!c.holds) c.message = "sum W^2 < z^2 / n";
    return c;
}

GainReport analyze(const DensityModel& model, Fault fault) {
    const Dataset& d = model.data();
    const std::size_t n = d.size();
    GainReport g;

    WeightTable table = compute_weights(model, SeedPool::AllSamples);
    const auto before = model.certainty_profile();

    g.gains.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ratios = addition_likelihood_ratio(model, i);
        const auto change = relative_certainty_change(before, model.insert_minority_whatif(i));
        for (std::size_t j = 0; j < n; ++j) {
            g.ratio_residual = std::max(g.ratio_residual, std::abs(ratios[j] - 1.0 - change[j]));
        }
        g.gains[i] = average_gain(ratios);
    }

    switch (fault) {
        case Fault::None: break;
        case Fault::UniformWeights: {
            const double mean = table.normalizer / static_cast<double>(n);
            table = WeightTable::from_weights(std::vector<double>(n, mean));
            break;
        }
        case Fault::NegativeWeight: {
            table.weights[0] = -0.5;
            table.normalizer = std::accumulate(table.weights.begin(), table.weights.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) table.probabilities[i] = table.weights[i] / table.normalizer;
            break;
        }
    }

    g.weights = table.weights;
    for (std::size_t i = 0; i < n; ++i) {
        g.gain_weight_residual = std::max(g.gain_weight_residual, std::abs(g.gains[i] - g.weights[i]));
        if (g.weights[i] == 0.0) ++g.zero_weights;
    }
    g.square_sum = verify_square_sum_bound(g.weights);
    g.expected = expected_gains(table, g.gains);
    g.form_residual = std::max(std::abs(g.expected.e_p - g.expected.e_p_closed),
                               std::abs(g.expected.e_s - g.expected.e_s_closed));
    g.weights_constant = !nonconstant(g.weights);
    return g;
}

DatasetCheck check_dataset(const std::string& name, const Dataset& d, const DensityParams& density, Fault fault) {
    DatasetCheck c;
    c.name = name;
    c.n = d.size();
    c.m = d.dims();
    c.n_minority = d.count(Label::Minority);
    c.report = analyze(DensityModel::fit(d, density), fault);
    const auto& g = c.report;

    c.gain_bound_holds = g.expected.e_p >= g.expected.e_s - kExpectedGainTolerance;
    c.equality = std::abs(g.expected.e_p - g.expected.e_s) <= kExpectedGainTolerance;
    c.strict_when_required = g.weights_constant || g.expected.e_p > g.expected.e_s;

    if (!g.square_sum.precondition_ok) note_failure(c.failures, "square_sum_precondition");
    else if (!g.square_sum.holds) note_failure(c.failures, "square_sum_bound");
    if (g.ratio_residual > kRatioIdentityTolerance) note_failure(c.failures, "ratio_identity");
    if (g.gain_weight_residual > kGainWeightTolerance) note_failure(c.failures, "gain_weight_identity");
    if (g.form_residual > kFormTolerance) note_failure(c.failures, "expected_gain_forms");
    if (!c.gain_bound_holds) note_failure(c.failures, "expected_gain");
    if (!c.strict_when_required) note_failure(c.failures, "expected_gain_strict");
    return c;
}

Dataset random_corpus_dataset(std::uint64_t seed, std::size_t index) {
    Rng rng = Rng::stream(seed, {0x636f7270 /* "corp" */, index});
    const std::size_t n = 10 + static_cast<std::size_t>(rng.uniform_index(191));
    const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform_index(5));
    const double ratio = 0.05 + 0.85 * rng.uniform01();
    std::size_t n_mnr = static_cast<std::size_t>(std::llround(static_cast<double>(n) * ratio / (1.0 + ratio)));
    n_mnr = std::clamp<std::size_t>(n_mnr, 2, n / 2);

    std::vector<double> shift(m);
    const double distance = 3.0 * rng.uniform01();
    double norm = 0.0;
    for (auto& s : shift) {
        s = rng.normal();
        norm += s * s;
    }
    norm = std::sqrt(norm);
    for (auto& s : shift) s = norm > 0 ? s / norm * distance : 0.0;
    const double spread = 0.5 + rng.uniform01();

    Matrix x(n, m);
    std::vector<Label> y(n, Label::Majority);
    for (std::size_t r = 0; r < n; ++r) {
        const bool minority = r >= n - n_mnr;
        if (minority) y[r] = Label::Minority;
        for (std::size_t c = 0; c < m; ++c) {
            x(r, c) = minority ? shift[c] + spread * rng.normal() : rng.normal();
        }
    }
    return Dataset(std::move(x), std::move(y));
}

Certificate run_suite(const SuiteOptions& options) {
    Certificate cert;
    auto add = [&](DatasetCheck check) {
        cert.max_ratio_residual = std::max(cert.max_ratio_residual, check.report.ratio_residual);
        cert.max_gain_weight_residual = std::max(cert.max_gain_weight_residual, check.report.gain_weight_residual);
        cert.max_form_residual = std::max(cert.max_form_residual, check.report.form_residual);
        for (const auto& f : check.failures) note_failure(cert.failed_properties, f);
        cert.checks.push_back(std::move(check));
    };
    for (std::size_t i = 0; i < options.n_datasets; ++i) {
        add(check_dataset("random_" + std::to_string(i), random_corpus_dataset(options.seed, i), options.density,
                          options.fault));
    }
    if (options.include_fixture) {
        add(check_dataset("two_gaussian_fixture", make_two_gaussian_fixture(), options.density, options.fault));
    }
    return cert;
}

}  // namespace cgmos::theory
