#include "cgmos/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cgmos/error.hpp"
#include "cgmos/neighbors.hpp"

namespace cgmos {
namespace {

void check_params(const Dataset& d, std::size_t q, double sigma) {
    if (q < 1 || q > d.size() - 1) {
        fail(ErrorKind::Parameter,
             "q must be in [1, n-1]; got q=" + std::to_string(q) + " with n=" + std::to_string(d.size()));
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) fail(ErrorKind::Parameter, "sigma must be a positive finite real");
}

double mean_neighbor_distance(const Matrix& x, std::span<const double> point, std::size_t q, std::size_t exclude) {
    const auto nbrs = nearest_neighbors(x, point, q, {}, exclude);
    double sum = 0.0;
    for (const auto& nb : nbrs) sum += nb.distance;
    return sum / static_cast<double>(q);
}

/// log of the Gaussian normalizer h^-m (2 pi)^-m/2.
double log_normalizer(double h, std::size_t m) {
    const double md = static_cast<double>(m);
    return -md * std::log(h) - 0.5 * md * std::log(2.0 * std::numbers::pi);
}

}  // namespace

double bandwidth_floor(const Dataset& d) {
    double diam2 = 0.0;
    for (std::size_t a = 0; a < d.size(); ++a) {
        for (std::size_t b = a + 1; b < d.size(); ++b) diam2 = std::max(diam2, squared_distance(d.row(a), d.row(b)));
    }
    const double diameter = std::sqrt(diam2);
    return kBandwidthFloorFactor * (diameter > 0.0 ? diameter : 1.0);
}

std::vector<double> compute_bandwidths(const Dataset& d, std::size_t q, double sigma) {
    check_params(d, q, sigma);
    std::vector<double> h(d.size());
    bool any_zero = false;
    for (std::size_t k = 0; k < d.size(); ++k) {
        const double mean = mean_neighbor_distance(d.features(), d.row(k), q, k);
        h[k] = sigma * mean;
        if (mean == 0.0) any_zero = true;
    }
    if (any_zero) {
        const double floor = bandwidth_floor(d);
        for (std::size_t k = 0; k < d.size(); ++k) {
            if (h[k] == 0.0) h[k] = floor;
        }
    }
    return h;
}

double kernel_term(std::span<const double> x, std::span<const double> center, double h) {
    const double d2 = squared_distance(x, center);
    return std::exp(log_normalizer(h, x.size()) - 0.5 * d2 / (h * h));
}

DensityModel DensityModel::fit(const Dataset& d, const DensityParams& params) {
    check_params(d, params.q, params.sigma);
    DensityModel model(d, params);
    model.bandwidths_ = compute_bandwidths(d, params.q, params.sigma);
    model.bandwidth_floor_ = bandwidth_floor(d);

    const std::size_t n = d.size();
    const std::size_t m = d.dims();
    std::vector<double> log_norm(n), inv_two_h2(n);
    for (std::size_t k = 0; k < n; ++k) {
        log_norm[k] = log_normalizer(model.bandwidths_[k], m);
        inv_two_h2[k] = 0.5 / (model.bandwidths_[k] * model.bandwidths_[k]);
    }

    model.kernel_sums_.assign(n, {0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) {
        auto& sums = model.kernel_sums_[j];
        const auto xj = d.row(j);
        // Fixed summation order k = 0..n-1 keeps the sums bit-reproducible.
        for (std::size_t k = 0; k < n; ++k) {
            if (k == j && !params.include_self) continue;
            const double t = std::exp(log_norm[k] - squared_distance(xj, d.row(k)) * inv_two_h2[k]);
            sums[static_cast<int>(d.label(k))] += t;
        }
    }
    return model;
}

double DensityModel::likelihood(std::size_t j, Label l) const {
    return kernel_sum(j, l) / static_cast<double>(class_count(l));
}

Posterior DensityModel::bayes(double sum_majority, double sum_minority, std::size_t n_majority,
                              std::size_t n_minority) const {
    const double n = static_cast<double>(n_majority + n_minority);
    const double prior_mjr = static_cast<double>(n_majority) / n;
    const double prior_mnr = static_cast<double>(n_minority) / n;
    const double joint_mjr = sum_majority / static_cast<double>(n_majority) * prior_mjr;
    const double joint_mnr = sum_minority / static_cast<double>(n_minority) * prior_mnr;
    const double evidence = joint_mjr + joint_mnr;
    if (!(evidence > 0.0)) return {prior_mjr, prior_mnr, true};
    return {joint_mjr / evidence, joint_mnr / evidence, false};
}

Posterior DensityModel::posterior(std::size_t j) const {
    return bayes(kernel_sum(j, Label::Majority), kernel_sum(j, Label::Minority), class_count(Label::Majority),
                 class_count(Label::Minority));
}

CertaintyProfile DensityModel::certainty_profile() const {
    CertaintyProfile p;
    p.certainty.resize(data_.size());
    for (std::size_t j = 0; j < data_.size(); ++j) {
        const auto post = posterior(j);
        p.certainty[j] = post.of(data_.label(j));
        if (post.fallback) ++p.fallbacks;
    }
    return p;
}

CertaintyProfile DensityModel::insert_minority_whatif(std::size_t i) const {
    if (i >= data_.size()) fail(ErrorKind::Parameter, "insertion index out of range");
    return insert_minority_at(data_.row(i), bandwidths_[i]);
}

CertaintyProfile DensityModel::insert_minority_at(std::span<const double> location, double h) const {
    if (location.size() != data_.dims()) fail(ErrorKind::DimensionMismatch, "insertion point has the wrong width");
    if (!(h > 0.0)) fail(ErrorKind::Parameter, "insertion bandwidth must be positive");
    const std::size_t n_mjr = class_count(Label::Majority);
    const std::size_t n_mnr = class_count(Label::Minority) + 1;
    CertaintyProfile p;
    p.certainty.resize(data_.size());
    for (std::size_t j = 0; j < data_.size(); ++j) {
        const double added = kernel_term(data_.row(j), location, h);
        const auto post = bayes(kernel_sum(j, Label::Majority), kernel_sum(j, Label::Minority) + added, n_mjr, n_mnr);
        p.certainty[j] = post.of(data_.label(j));
        if (post.fallback) ++p.fallbacks;
    }
    return p;
}

Posterior DensityModel::query_posterior(std::span<const double> x) const {
    if (x.size() != data_.dims()) fail(ErrorKind::DimensionMismatch, "query point has the wrong width");
    double sums[2] = {0.0, 0.0};
    for (std::size_t k = 0; k < data_.size(); ++k) {
        sums[static_cast<int>(data_.label(k))] += kernel_term(x, data_.row(k), bandwidths_[k]);
    }
    return bayes(sums[0], sums[1], class_count(Label::Majority), class_count(Label::Minority));
}

double DensityModel::bandwidth_at(std::span<const double> x) const {
    if (x.size() != data_.dims()) fail(ErrorKind::DimensionMismatch, "point has the wrong width");
    const double h = params_.sigma * mean_neighbor_distance(data_.features(), x, params_.q, kNoExclusion);
    return h > 0.0 ? h : bandwidth_floor_;
}

}  // namespace cgmos
