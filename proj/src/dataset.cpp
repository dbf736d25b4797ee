#include "cgmos/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "cgmos/error.hpp"
#include "cgmos/rng.hpp"

namespace cgmos {

Dataset::Dataset(Matrix features, std::vector<Label> labels, std::vector<std::string> feature_names,
                 ClassNames class_names, std::vector<std::string> source_labels, std::string label_column)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)),
      class_names_(std::move(class_names)),
      source_labels_(std::move(source_labels)),
      label_column_(std::move(label_column)) {
    if (features_.rows() != labels_.size()) {
        fail(ErrorKind::DimensionMismatch, "feature rows (" + std::to_string(features_.rows()) +
                                               ") and labels (" + std::to_string(labels_.size()) + ") differ");
    }
    if (labels_.size() < 2) fail(ErrorKind::DegenerateDataset, "dataset needs at least 2 samples");
    if (features_.cols() < 1) fail(ErrorKind::DegenerateDataset, "dataset needs at least 1 feature");
    if (!source_labels_.empty() && source_labels_.size() != labels_.size()) {
        fail(ErrorKind::DimensionMismatch, "source label count differs from sample count");
    }
    if (feature_names_.empty()) {
        for (std::size_t c = 0; c < features_.cols(); ++c) feature_names_.push_back("x" + std::to_string(c + 1));
    } else if (feature_names_.size() != features_.cols()) {
        fail(ErrorKind::DimensionMismatch, "feature name count differs from feature count");
    }
    for (double v : features_.data()) {
        if (!std::isfinite(v)) fail(ErrorKind::Parse, "non-finite feature value");
    }
    n_minority_ = static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), Label::Minority));
    if (n_minority_ == 0 || n_minority_ == labels_.size()) {
        fail(ErrorKind::DegenerateDataset, "both classes must be non-empty");
    }
}

ClassPartition Dataset::partition() const {
    ClassPartition p;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        (labels_[i] == Label::Minority ? p.minority_indices : p.majority_indices).push_back(i);
    }
    p.imbalance_ratio = imbalance_ratio();
    return p;
}

double Dataset::imbalance_ratio() const noexcept {
    return static_cast<double>(count(Label::Minority)) / static_cast<double>(count(Label::Majority));
}

std::ptrdiff_t Dataset::gap() const noexcept {
    return static_cast<std::ptrdiff_t>(count(Label::Majority)) - static_cast<std::ptrdiff_t>(count(Label::Minority));
}

const std::string& Dataset::label_text(std::size_t i) const {
    if (!source_labels_.empty()) return source_labels_[i];
    return labels_[i] == Label::Minority ? class_names_.minority : class_names_.majority;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Matrix x(indices.size(), dims());
    std::vector<Label> y;
    std::vector<std::string> src;
    y.reserve(indices.size());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        auto from = row(indices[r]);
        std::copy(from.begin(), from.end(), x.row(r).begin());
        y.push_back(labels_[indices[r]]);
        if (!source_labels_.empty()) src.push_back(source_labels_[indices[r]]);
    }
    return Dataset(std::move(x), std::move(y), feature_names_, class_names_, std::move(src), label_column_);
}

Dataset Dataset::with_appended(const Matrix& rows, Label l) const {
    if (rows.rows() == 0) return *this;
    if (rows.cols() != dims()) fail(ErrorKind::DimensionMismatch, "appended rows have the wrong width");
    Matrix x = features_;
    std::vector<Label> y = labels_;
    std::vector<std::string> src = source_labels_;
    const std::string& name = l == Label::Minority ? class_names_.minority : class_names_.majority;
    for (std::size_t r = 0; r < rows.rows(); ++r) {
        x.append_row(rows.row(r));
        y.push_back(l);
        if (!src.empty()) src.push_back(name);
    }
    return Dataset(std::move(x), std::move(y), feature_names_, class_names_, std::move(src), label_column_);
}

BinaryLabels binarize_keep_smallest(const std::vector<std::string>& labels) {
    std::map<std::string, std::size_t> counts;  // ordered: lexicographic tie-break
    for (const auto& l : labels) ++counts[l];
    if (counts.size() < 2) fail(ErrorKind::DegenerateDataset, "need at least 2 distinct labels");

    auto smallest = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it) {
        if (it->second < smallest->second) smallest = it;
    }
    BinaryLabels out;
    out.names.minority = smallest->first;
    std::string merged;
    for (const auto& [name, _] : counts) {
        if (name == smallest->first) continue;
        if (!merged.empty()) merged += '|';
        merged += name;
    }
    out.names.majority = merged;
    out.labels.reserve(labels.size());
    for (const auto& l : labels) out.labels.push_back(l == smallest->first ? Label::Minority : Label::Majority);
    return out;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

/// Splits one record; double-quoted fields may contain the delimiter and "" escapes.
std::vector<std::string> split_record(std::string_view line, char delim) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delim) {
            out.emplace_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.emplace_back(trim(cur));
    return out;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
    auto where = [&] { return "row " + std::to_string(row) + ", column '" + column + "'"; };
    if (cell.empty()) fail(ErrorKind::Parse, "missing value at " + where());
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        fail(ErrorKind::Parse, "non-numeric value '" + cell + "' at " + where());
    }
    if (!std::isfinite(v)) fail(ErrorKind::Parse, "non-finite value '" + cell + "' at " + where());
    return v;
}

}  // namespace

Dataset parse_csv(std::istream& in, const CsvOptions& options) {
    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::Parse, "empty CSV input");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const auto header = split_record(line, options.delimiter);
    if (header.size() < 2) fail(ErrorKind::Parse, "CSV needs at least one feature and one label column");

    std::size_t label_col = header.size() - 1;
    if (options.label_name) {
        auto it = std::find(header.begin(), header.end(), *options.label_name);
        if (it == header.end()) fail(ErrorKind::Parse, "label column '" + *options.label_name + "' not found");
        label_col = static_cast<std::size_t>(it - header.begin());
    } else if (options.label_index) {
        if (*options.label_index >= header.size()) {
            fail(ErrorKind::Parse, "label column index " + std::to_string(*options.label_index) + " out of range");
        }
        label_col = *options.label_index;
    }

    std::vector<std::string> names;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != label_col) names.push_back(header[c]);
    }

    Matrix x(0, 0);
    std::vector<std::string> raw_labels;
    std::vector<double> values(header.size() - 1);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split_record(line, options.delimiter);
        if (cells.size() != header.size()) {
            fail(ErrorKind::Parse, "row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                                       " fields, expected " + std::to_string(header.size()));
        }
        std::size_t f = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == label_col) continue;
            values[f++] = parse_cell(cells[c], row, header[c]);
        }
        if (cells[label_col].empty()) {
            fail(ErrorKind::Parse, "missing label at row " + std::to_string(row));
        }
        x.append_row(values);
        raw_labels.push_back(cells[label_col]);
    }
    if (raw_labels.empty()) fail(ErrorKind::DegenerateDataset, "CSV has no data rows");

    BinaryLabels bin;
    if (options.minority_label) {
        const auto& target = *options.minority_label;
        std::size_t hits = 0;
        std::map<std::string, std::size_t> rest;
        for (const auto& l : raw_labels) {
            if (l == target) {
                ++hits;
            } else {
                ++rest[l];
            }
        }
        std::string others;
        for (const auto& [name, _] : rest) others += (others.empty() ? "" : "|") + name;
        if (hits == 0) fail(ErrorKind::DegenerateDataset, "minority label '" + target + "' not present");
        if (hits == raw_labels.size()) fail(ErrorKind::DegenerateDataset, "single-class dataset");
        if (hits > raw_labels.size() - hits) {
            fail(ErrorKind::Parameter, "label '" + target + "' is the larger class and cannot be the minority");
        }
        bin.names.minority = target;
        bin.names.majority = others;
        for (const auto& l : raw_labels) bin.labels.push_back(l == target ? Label::Minority : Label::Majority);
    } else {
        bin = binarize_keep_smallest(raw_labels);
    }
    return Dataset(std::move(x), std::move(bin.labels), std::move(names), std::move(bin.names),
                   std::move(raw_labels), header[label_col]);
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
    return parse_csv(in, options);
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

std::string quote_if_needed(const std::string& s, char delim) {
    if (s.find(delim) == std::string::npos && s.find('"') == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

void write_csv(const Dataset& d, std::ostream& out, char delimiter) {
    for (const auto& name : d.feature_names()) out << quote_if_needed(name, delimiter) << delimiter;
    out << quote_if_needed(d.label_column(), delimiter) << '\n';
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (double v : d.row(i)) out << format_double(v) << delimiter;
        out << quote_if_needed(d.label_text(i), delimiter) << '\n';
    }
}

void write_csv(const Dataset& d, const std::filesystem::path& path, char delimiter) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
    write_csv(d, out, delimiter);
    if (!out) fail(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

Dataset min_max_scale(const Dataset& d) {
    Matrix x = d.features();
    for (std::size_t c = 0; c < d.dims(); ++c) {
        double lo = x(0, c), hi = x(0, c);
        for (std::size_t r = 1; r < d.size(); ++r) {
            lo = std::min(lo, x(r, c));
            hi = std::max(hi, x(r, c));
        }
        const double span = hi - lo;
        for (std::size_t r = 0; r < d.size(); ++r) x(r, c) = span > 0.0 ? (x(r, c) - lo) / span : 0.0;
    }
    std::vector<std::string> src;
    src.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) src.push_back(d.label_text(i));
    return Dataset(std::move(x), d.labels(), d.feature_names(), d.class_names(), std::move(src), d.label_column());
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t round, std::size_t fold) const {
    std::vector<std::size_t> out;
    const auto& a = assignments.at(round);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == fold) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t round, std::size_t fold) const {
    std::vector<std::size_t> out;
    const auto& a = assignments.at(round);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != fold) out.push_back(i);
    }
    return out;
}

namespace {

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_index(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace

FoldPlan stratified_folds(const Dataset& d, std::size_t rounds, std::size_t folds, std::uint64_t seed) {
    if (rounds < 1) fail(ErrorKind::Parameter, "rounds must be >= 1");
    if (folds < 2) fail(ErrorKind::Parameter, "folds must be >= 2");
    if (folds > d.count(Label::Minority)) {
        fail(ErrorKind::InfeasibleStratification,
             std::to_string(folds) + " folds requested but only " + std::to_string(d.count(Label::Minority)) +
                 " minority samples");
    }
    FoldPlan plan{rounds, folds, seed, {}};
    const auto part = d.partition();
    for (std::size_t r = 0; r < rounds; ++r) {
        Rng rng = Rng::stream(seed, {0x666f6c64 /* "fold" */, r});
        auto minority = part.minority_indices;
        auto majority = part.majority_indices;
        shuffle(minority, rng);
        shuffle(majority, rng);
        std::vector<std::uint32_t> assign(d.size());
        std::size_t slot = 0;
        for (auto i : minority) assign[i] = static_cast<std::uint32_t>(slot++ % folds);
        for (auto i : majority) assign[i] = static_cast<std::uint32_t>(slot++ % folds);
        plan.assignments.push_back(std::move(assign));
    }
    return plan;
}

Dataset make_two_gaussian_fixture(std::size_t n_major, std::size_t n_minor, double separation, std::uint64_t seed) {
    if (n_major < 2 || n_minor < 2) fail(ErrorKind::Parameter, "fixture needs at least 2 samples per class");
    Rng rng = Rng::stream(seed, {0x6669786a /* "fixj" */});
    Matrix x(n_major + n_minor, 2);
    std::vector<Label> y;
    y.reserve(n_major + n_minor);
    for (std::size_t i = 0; i < n_major; ++i) {
        x(i, 0) = separation + rng.normal();
        x(i, 1) = rng.normal();
        y.push_back(Label::Majority);
    }
    for (std::size_t i = n_major; i < n_major + n_minor; ++i) {
        x(i, 0) = rng.normal();
        x(i, 1) = rng.normal();
        y.push_back(Label::Minority);
    }
    return Dataset(std::move(x), std::move(y), {"x1", "x2"});
}

}  // namespace cgmos
