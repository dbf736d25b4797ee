#include "cgmos/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cgmos/error.hpp"

namespace cgmos {

ConfusionCounts confusion(std::span<const Label> labels, std::span<const Label> predictions, Label positive) {
    if (labels.size() != predictions.size()) fail(ErrorKind::DimensionMismatch, "labels and predictions differ in length");
    ConfusionCounts c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool actual = labels[i] == positive;
        const bool predicted = predictions[i] == positive;
        if (actual && predicted) ++c.tp;
        else if (!actual && predicted) ++c.fp;
        else if (actual) ++c.fn;
        else ++c.tn;
    }
    return c;
}

PrecisionRecall precision_recall(const ConfusionCounts& c) noexcept {
    PrecisionRecall pr;
    if (c.tp + c.fp == 0) {
        pr.precision_undefined = true;
    } else {
        pr.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    }
    if (c.tp + c.fn == 0) {
        pr.recall_undefined = true;
    } else {
        pr.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    }
    return pr;
}

double f_score(double precision, double recall, double beta) noexcept {
    const double b2 = beta * beta;
    const double denom = b2 * precision + recall;
    if (denom == 0.0) return 0.0;
    return (1.0 + b2) * precision * recall / denom;
}

double g_score(double precision, double recall) noexcept { return std::sqrt(precision * recall); }

ClassMetrics class_metrics(std::span<const Label> labels, std::span<const Label> predictions, Label positive) {
    const auto pr = precision_recall(confusion(labels, predictions, positive));
    ClassMetrics m;
    m.precision = pr.precision;
    m.recall = pr.recall;
    m.f_score = f_score(pr.precision, pr.recall);
    m.g_score = g_score(pr.precision, pr.recall);
    m.undefined = static_cast<std::size_t>(pr.precision_undefined) + static_cast<std::size_t>(pr.recall_undefined);
    return m;
}

double trapezoid_auc(std::span<const RocPoint> points) noexcept {
    double area = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
    }
    return area;
}

RocCurve roc_auc(std::span<const Label> labels, std::span<const double> scores, Label positive) {
    if (labels.size() != scores.size()) fail(ErrorKind::DimensionMismatch, "labels and scores differ in length");
    std::size_t n_pos = 0;
    for (auto l : labels) n_pos += l == positive ? 1 : 0;
    const std::size_t n_neg = labels.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) fail(ErrorKind::InsufficientData, "ROC needs both positive and negative samples");

    std::vector<std::size_t> order(labels.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve roc;
    roc.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double threshold = scores[order[i]];
        while (i < order.size() && scores[order[i]] == threshold) {
            if (labels[order[i]] == positive) ++tp;
            else ++fp;
            ++i;
        }
        roc.points.push_back({threshold, static_cast<double>(fp) / static_cast<double>(n_neg),
                              static_cast<double>(tp) / static_cast<double>(n_pos)});
    }
    roc.auc = trapezoid_auc(roc.points);
    return roc;
}

}  // namespace cgmos
