#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cgmos/evaluation.hpp"
#include "cgmos/metrics.hpp"
#include "cgmos/oversampler.hpp"
#include "cgmos/theory.hpp"

namespace cgmos {

using Json = nlohmann::ordered_json;

/// Version string stamped into every artifact.
std::string version_string();

Json to_json(const ClassMetrics& m);
/// Report body (aggregates, per-fold records without per-sample scores).
Json to_json(const EvaluationReport& r);
Json to_json(const theory::Certificate& c);

struct FoldAuc {
    std::size_t round = 0;
    std::size_t fold = 0;
    double auc = 0.0;
    bool failed = false;
};

/// Per-fold AUC records from a report JSON written by the CLI.
std::vector<FoldAuc> read_fold_aucs(const Json& report);

/// CSV with header `threshold,fpr,tpr`; the first threshold is written as `inf`.
void write_roc_csv(const RocCurve& roc, std::ostream& out);
RocCurve read_roc_csv(std::istream& in);

void write_weight_csv(const WeightTable& table, std::ostream& out);

/// One row of an external score file (`row_id,score,label`).
struct ScoredSample {
    std::string row_id;
    double score = 0.0;
    std::string label;
};

std::vector<ScoredSample> read_score_file(std::istream& in);

struct GradeReport {
    std::size_t n = 0;
    std::string minority_label;
    ClassMetrics minority;
    ClassMetrics majority;
    RocCurve roc;
};

/// Scores are minority-class scores; predictions use the > 0.5 rule. The
/// minority label defaults to the rarer label (lexicographic on ties).
GradeReport grade_scores(const std::vector<ScoredSample>& samples,
                         const std::optional<std::string>& minority_label = std::nullopt);

Json to_json(const GradeReport& g);

/// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace cgmos
