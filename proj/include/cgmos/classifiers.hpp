#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>

#include "cgmos/dataset.hpp"
#include "cgmos/density.hpp"

namespace cgmos {

enum class ClassifierKind { BKde, Knn };

struct ClassifierParams {
    ClassifierKind kind = ClassifierKind::BKde;
    DensityParams density{};
    std::size_t knn_k = 5;
};

/// Bayes rule over the adaptive-bandwidth KDE likelihoods.
class KdeBayesClassifier {
public:
    explicit KdeBayesClassifier(DensityModel model) : model_(std::move(model)) {}
    const DensityModel& model() const noexcept { return model_; }
    double score_minority(std::span<const double> x) const;

private:
    DensityModel model_;
};

/// Minority vote fraction among the k nearest training samples.
class KnnClassifier {
public:
    KnnClassifier(Dataset train, std::size_t k);
    std::size_t k() const noexcept { return k_; }
    const Dataset& data() const noexcept { return train_; }
    double score_minority(std::span<const double> x) const;

private:
    Dataset train_;
    std::size_t k_;
};

class TrainedClassifier {
public:
    using State = std::variant<KdeBayesClassifier, KnnClassifier>;

    explicit TrainedClassifier(State state) : state_(std::move(state)) {}

    ClassifierKind kind() const noexcept;
    std::size_t dims() const noexcept;
    const State& state() const noexcept { return state_; }

    /// Score in [0, 1]; throws DimensionMismatch on a wrong-width query.
    double score_minority(std::span<const double> x) const;
    /// Minority iff score > 0.5; an exact 0.5 resolves to majority.
    Label predict(std::span<const double> x) const;

private:
    State state_;
};

TrainedClassifier train(const Dataset& d, const ClassifierParams& params);

Label decide(double minority_score) noexcept;

std::string_view to_string(ClassifierKind k) noexcept;

}  // namespace cgmos
