#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "cgmos/dataset.hpp"

namespace cgmos {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

ConfusionCounts confusion(std::span<const Label> labels, std::span<const Label> predictions, Label positive);

/// 0/0 ratios are reported as 0 and flagged.
struct PrecisionRecall {
    double precision = 0.0;
    double recall = 0.0;
    bool precision_undefined = false;
    bool recall_undefined = false;
};

PrecisionRecall precision_recall(const ConfusionCounts& c) noexcept;

/// (1 + b^2) p r / (b^2 p + r); 0 when both are 0.
double f_score(double precision, double recall, double beta = 1.0) noexcept;

/// Geometric mean of precision and recall.
double g_score(double precision, double recall) noexcept;

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
    double g_score = 0.0;
    /// Number of 0/0 ratios folded in as 0.
    std::size_t undefined = 0;
};

ClassMetrics class_metrics(std::span<const Label> labels, std::span<const Label> predictions, Label positive);

struct RocPoint {
    double threshold;
    double fpr;
    double tpr;
};

/// ROC over thresholds from +inf down through each distinct score. Tied
/// scores form a single (possibly diagonal) step.
struct RocCurve {
    std::vector<RocPoint> points;
    double auc = 0.0;
};

/// `scores` are positive-class scores (higher means more positive).
RocCurve roc_auc(std::span<const Label> labels, std::span<const double> scores, Label positive);

/// Trapezoid area under an (fpr, tpr) polyline.
double trapezoid_auc(std::span<const RocPoint> points) noexcept;

}  // namespace cgmos
