#include "cgmos/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "cgmos/error.hpp"

#ifndef CGMOS_VERSION
#define CGMOS_VERSION "0.0.0+unknown"
#endif

namespace cgmos {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string trim(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
    std::size_t b = 0;
    while (b < s.size() && (s[b] == ' ' || s[b] == '\t')) ++b;
    return s.substr(b);
}

double parse_number(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        fail(ErrorKind::Parse, "cannot parse " + what + " '" + t + "'");
    }
    return v;
}

Json roc_points(const RocCurve& roc) {
    Json pts = Json::array();
    for (const auto& p : roc.points) {
        pts.push_back({{"threshold", std::isinf(p.threshold) ? Json("inf") : Json(p.threshold)},
                       {"fpr", p.fpr},
                       {"tpr", p.tpr}});
    }
    return pts;
}

}  // namespace

std::string version_string() { return CGMOS_VERSION; }

Json to_json(const ClassMetrics& m) {
    return {{"precision", m.precision},
            {"recall", m.recall},
            {"f1", m.f_score},
            {"g", m.g_score},
            {"undefined", m.undefined}};
}

Json to_json(const EvaluationReport& r) {
    Json folds = Json::array();
    for (const auto& f : r.folds) {
        Json rec = {{"round", f.round},   {"fold", f.fold},           {"n_train", f.n_train},
                    {"n_test", f.n_test}, {"n_synthetic", f.n_synthetic}, {"leakage_checked", f.leakage_checked},
                    {"failed", f.failed}};
        if (f.failed) {
            rec["failure"] = f.failure;
            rec["auc"] = nullptr;
        } else {
            rec["auc"] = f.auc;
            rec["minority"] = to_json(f.minority);
            rec["majority"] = to_json(f.majority);
        }
        folds.push_back(std::move(rec));
    }
    return {{"method", r.method},
            {"classifier", r.classifier},
            {"auc", r.auc},
            {"minority", to_json(r.minority)},
            {"majority", to_json(r.majority)},
            {"failed_folds", r.failed_folds},
            {"undefined_metrics", r.undefined_metrics},
            {"pooled_auc", r.roc.auc},
            {"folds", std::move(folds)}};
}

Json to_json(const theory::Certificate& c) {
    Json checks = Json::array();
    for (const auto& d : c.checks) {
        const auto& g = d.report;
        checks.push_back({{"name", d.name},
                          {"n", d.n},
                          {"m", d.m},
                          {"n_minority", d.n_minority},
                          {"e_p", g.expected.e_p},
                          {"e_s", g.expected.e_s},
                          {"e_p_closed", g.expected.e_p_closed},
                          {"e_s_closed", g.expected.e_s_closed},
                          {"square_sum_margin", g.square_sum.margin},
                          {"ratio_residual", g.ratio_residual},
                          {"gain_weight_residual", g.gain_weight_residual},
                          {"form_residual", g.form_residual},
                          {"weights_constant", g.weights_constant},
                          {"zero_weights", g.zero_weights},
                          {"gain_bound_holds", d.gain_bound_holds},
                          {"equality", d.equality},
                          {"failures", d.failures}});
    }
    return {{"passed", c.passed()},
            {"failed_properties", c.failed_properties},
            {"max_ratio_residual", c.max_ratio_residual},
            {"max_gain_weight_residual", c.max_gain_weight_residual},
            {"max_form_residual", c.max_form_residual},
            {"datasets", std::move(checks)}};
}

std::vector<FoldAuc> read_fold_aucs(const Json& report) {
    if (!report.is_object() || !report.contains("folds") || !report["folds"].is_array()) {
        fail(ErrorKind::Parse, "report has no 'folds' array");
    }
    std::vector<FoldAuc> out;
    for (const auto& f : report["folds"]) {
        FoldAuc a;
        try {
            a.round = f.at("round").get<std::size_t>();
            a.fold = f.at("fold").get<std::size_t>();
            a.failed = f.at("failed").get<bool>();
            a.auc = a.failed || f.at("auc").is_null() ? std::nan("") : f.at("auc").get<double>();
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::Parse, std::string("malformed fold record: ") + e.what());
        }
        out.push_back(a);
    }
    return out;
}

void write_roc_csv(const RocCurve& roc, std::ostream& out) {
    out << "threshold,fpr,tpr\n";
    for (const auto& p : roc.points) {
        out << (std::isinf(p.threshold) ? std::string("inf") : format_double(p.threshold)) << ','
            << format_double(p.fpr) << ',' << format_double(p.tpr) << '\n';
    }
}

RocCurve read_roc_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "threshold,fpr,tpr") fail(ErrorKind::Parse, "ROC csv header mismatch");
    RocCurve roc;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto cells = split(trim(line), ',');
        if (cells.size() != 3) fail(ErrorKind::Parse, "ROC csv row must have 3 fields");
        roc.points.push_back(
            {parse_number(cells[0], "threshold"), parse_number(cells[1], "fpr"), parse_number(cells[2], "tpr")});
    }
    roc.auc = trapezoid_auc(roc.points);
    return roc;
}

void write_weight_csv(const WeightTable& table, std::ostream& out) {
    out << "index,weight,probability\n";
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << i << ',' << format_double(table.weights[i]) << ',' << format_double(table.probabilities[i]) << '\n';
    }
}

std::vector<ScoredSample> read_score_file(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::Parse, "score file is empty");
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const auto header = split(trim(line), ',');
    if (header.size() != 3 || trim(header[0]) != "row_id" || trim(header[1]) != "score" || trim(header[2]) != "label") {
        fail(ErrorKind::Parse, "score file header must be row_id,score,label");
    }
    std::vector<ScoredSample> out;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split(trim(line), ',');
        if (cells.size() != 3) fail(ErrorKind::Parse, "score file row " + std::to_string(row) + " must have 3 fields");
        ScoredSample s{trim(cells[0]), parse_number(cells[1], "score at row " + std::to_string(row)), trim(cells[2])};
        if (!std::isfinite(s.score)) fail(ErrorKind::Parse, "non-finite score at row " + std::to_string(row));
        if (s.label.empty()) fail(ErrorKind::Parse, "missing label at row " + std::to_string(row));
        out.push_back(std::move(s));
    }
    return out;
}

GradeReport grade_scores(const std::vector<ScoredSample>& samples, const std::optional<std::string>& minority_label) {
    std::map<std::string, std::size_t> counts;
    for (const auto& s : samples) ++counts[s.label];
    if (counts.size() != 2) {
        fail(ErrorKind::InsufficientData,
             "grading needs exactly two labels, found " + std::to_string(counts.size()));
    }
    GradeReport g;
    g.n = samples.size();
    if (minority_label) {
        if (!counts.contains(*minority_label)) fail(ErrorKind::Parameter, "minority label '" + *minority_label + "' not found");
        g.minority_label = *minority_label;
    } else {
        const auto first = counts.begin();
        const auto second = std::next(first);
        g.minority_label = second->second < first->second ? second->first : first->first;
    }
    std::vector<Label> truth, predicted;
    std::vector<double> scores;
    for (const auto& s : samples) {
        truth.push_back(s.label == g.minority_label ? Label::Minority : Label::Majority);
        predicted.push_back(decide(s.score));
        scores.push_back(s.score);
    }
    g.minority = class_metrics(truth, predicted, Label::Minority);
    g.majority = class_metrics(truth, predicted, Label::Majority);
    g.roc = roc_auc(truth, scores, Label::Minority);
    return g;
}

Json to_json(const GradeReport& g) {
    return {{"n", g.n},
            {"minority_label", g.minority_label},
            {"auc", g.roc.auc},
            {"minority", to_json(g.minority)},
            {"majority", to_json(g.majority)},
            {"roc", roc_points(g.roc)}};
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) fail(ErrorKind::Io, "cannot create directory " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out << text;
    if (!out) fail(ErrorKind::Io, "write to " + path.string() + " failed");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace cgmos
