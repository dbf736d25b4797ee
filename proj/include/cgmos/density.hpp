#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "cgmos/dataset.hpp"

namespace cgmos {

struct DensityParams {
    /// Neighbours averaged for each sample's bandwidth.
    std::size_t q = 5;
    /// Bandwidth scale applied to the mean neighbour distance.
    double sigma = 1.0;
    /// Whether a sample's own kernel contributes to the density at itself.
    bool include_self = true;
};

/// Relative factor for the bandwidth floor on zero neighbour distance.
inline constexpr double kBandwidthFloorFactor = 1e-9;

/// h_k = sigma * mean distance from x_k to its q nearest neighbours in the
/// whole dataset (self excluded, ties by index). A zero mean distance is
/// floored at 1e-9 * diameter (or 1e-9 when all points coincide).
std::vector<double> compute_bandwidths(const Dataset& d, std::size_t q, double sigma);

/// The floor applied above: 1e-9 * largest pairwise distance, or 1e-9.
double bandwidth_floor(const Dataset& d);

/// Contribution of a kernel centred at `center` with bandwidth h to the
/// density at `x`: h^-m (2 pi)^-m/2 exp(-|x - center|^2 / (2 h^2)).
double kernel_term(std::span<const double> x, std::span<const double> center, double h);

struct Posterior {
    double majority = 0.5;
    double minority = 0.5;
    /// Both likelihoods underflowed to zero; the pair equals the class priors.
    bool fallback = false;

    double of(Label l) const noexcept { return l == Label::Minority ? minority : majority; }
};

/// Posterior of each sample's ground-truth label.
struct CertaintyProfile {
    std::vector<double> certainty;
    std::size_t fallbacks = 0;

    std::size_t size() const noexcept { return certainty.size(); }
    double operator[](std::size_t j) const { return certainty[j]; }
};

/// Adaptive-bandwidth KDE over a binary dataset with cached per-class kernel
/// sums. Immutable after fit; every query below is a pure read, so what-if
/// insertions cost O(n m) instead of a refit.
class DensityModel {
public:
    static DensityModel fit(const Dataset& d, const DensityParams& params = {});

    const Dataset& data() const noexcept { return data_; }
    const DensityParams& params() const noexcept { return params_; }
    const std::vector<double>& bandwidths() const noexcept { return bandwidths_; }
    double bandwidth(std::size_t k) const { return bandwidths_[k]; }

    /// S[j][l]: sum over class-l samples k of kernel_term(x_j, x_k, h_k).
    double kernel_sum(std::size_t j, Label l) const { return kernel_sums_[j][static_cast<int>(l)]; }
    std::size_t class_count(Label l) const noexcept { return data_.count(l); }

    /// Class-conditional density P(x_j | l) = S[j][l] / n_l.
    double likelihood(std::size_t j, Label l) const;

    Posterior posterior(std::size_t j) const;
    CertaintyProfile certainty_profile() const;

    /// Certainties after hypothetically adding one minority sample at x_i
    /// with the frozen bandwidth h_i. Other bandwidths are not recomputed.
    CertaintyProfile insert_minority_whatif(std::size_t i) const;
    /// Same, for an arbitrary location with an explicit bandwidth.
    CertaintyProfile insert_minority_at(std::span<const double> location, double h) const;

    /// Posterior at an unseen point; training samples are the only kernel centres.
    Posterior query_posterior(std::span<const double> x) const;
    /// Bandwidth a new point at `x` would receive (q-NN rule against the data).
    double bandwidth_at(std::span<const double> x) const;

private:
    DensityModel(Dataset data, DensityParams params)
        : data_(std::move(data)), params_(params) {}

    Posterior bayes(double sum_majority, double sum_minority, std::size_t n_majority,
                    std::size_t n_minority) const;

    Dataset data_;
    DensityParams params_;
    std::vector<double> bandwidths_;
    double bandwidth_floor_ = 0.0;
    std::vector<std::array<double, 2>> kernel_sums_;
};

}  // namespace cgmos
