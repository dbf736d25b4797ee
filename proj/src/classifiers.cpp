#include "cgmos/classifiers.hpp"

#include "cgmos/error.hpp"
#include "cgmos/neighbors.hpp"

namespace cgmos {

double KdeBayesClassifier::score_minority(std::span<const double> x) const {
    return model_.query_posterior(x).minority;
}

KnnClassifier::KnnClassifier(Dataset train, std::size_t k) : train_(std::move(train)), k_(k) {
    if (k_ < 1 || k_ > train_.size()) {
        fail(ErrorKind::Parameter, "knn k must be in [1, n]; got k=" + std::to_string(k_) +
                                       " with n=" + std::to_string(train_.size()));
    }
}

double KnnClassifier::score_minority(std::span<const double> x) const {
    if (x.size() != train_.dims()) fail(ErrorKind::DimensionMismatch, "query point has the wrong width");
    std::size_t votes = 0;
    for (const auto& nb : nearest_neighbors(train_.features(), x, k_)) {
        if (train_.label(nb.index) == Label::Minority) ++votes;
    }
    return static_cast<double>(votes) / static_cast<double>(k_);
}

ClassifierKind TrainedClassifier::kind() const noexcept {
    return std::holds_alternative<KdeBayesClassifier>(state_) ? ClassifierKind::BKde : ClassifierKind::Knn;
}

std::size_t TrainedClassifier::dims() const noexcept {
    return std::visit(
        [](const auto& c) {
            if constexpr (std::is_same_v<std::decay_t<decltype(c)>, KdeBayesClassifier>) {
                return c.model().data().dims();
            } else {
                return c.data().dims();
            }
        },
        state_);
}

double TrainedClassifier::score_minority(std::span<const double> x) const {
    if (x.size() != dims()) {
        fail(ErrorKind::DimensionMismatch,
             "query has " + std::to_string(x.size()) + " features, classifier expects " + std::to_string(dims()));
    }
    return std::visit([&](const auto& c) { return c.score_minority(x); }, state_);
}

Label decide(double minority_score) noexcept {
    return minority_score > 0.5 ? Label::Minority : Label::Majority;
}

Label TrainedClassifier::predict(std::span<const double> x) const { return decide(score_minority(x)); }

TrainedClassifier train(const Dataset& d, const ClassifierParams& params) {
    switch (params.kind) {
        case ClassifierKind::BKde: return TrainedClassifier(KdeBayesClassifier(DensityModel::fit(d, params.density)));
        case ClassifierKind::Knn: return TrainedClassifier(KnnClassifier(d, params.knn_k));
    }
    fail(ErrorKind::Parameter, "unknown classifier kind");
}

std::string_view to_string(ClassifierKind k) noexcept {
    return k == ClassifierKind::BKde ? "b_kde" : "knn";
}

}  // namespace cgmos
