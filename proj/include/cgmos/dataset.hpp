#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cgmos/matrix.hpp"

namespace cgmos {

enum class Label : std::uint8_t { Majority = 0, Minority = 1 };

inline constexpr Label other(Label l) noexcept {
    return l == Label::Minority ? Label::Majority : Label::Minority;
}

struct ClassPartition {
    std::vector<std::size_t> minority_indices;
    std::vector<std::size_t> majority_indices;
    /// |minority| / |majority|. Exceeds 1 only for datasets oversampled past balance.
    double imbalance_ratio = 0.0;
};

struct ClassNames {
    std::string majority = "majority";
    std::string minority = "minority";
};

/// Binary-labelled feature matrix.
///
/// Construction checks the structural invariants (matching lengths, at least
/// one feature, both classes present, finite values). The minority <= majority
/// ordering is established by the ingestion paths (binarize_keep_smallest,
/// load_csv, the fixture generator); oversampled training sets are allowed to
/// push the minority class past balance.
class Dataset {
public:
    Dataset(Matrix features, std::vector<Label> labels,
            std::vector<std::string> feature_names = {}, ClassNames class_names = {},
            std::vector<std::string> source_labels = {}, std::string label_column = "label");

    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t dims() const noexcept { return features_.cols(); }

    const Matrix& features() const noexcept { return features_; }
    const std::vector<Label>& labels() const noexcept { return labels_; }
    Label label(std::size_t i) const { return labels_[i]; }
    std::span<const double> row(std::size_t i) const { return features_.row(i); }

    std::size_t count(Label l) const noexcept { return l == Label::Minority ? n_minority_ : size() - n_minority_; }
    ClassPartition partition() const;
    double imbalance_ratio() const noexcept;
    /// Majority minus minority count (the oversampling gap).
    std::ptrdiff_t gap() const noexcept;

    const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
    const ClassNames& class_names() const noexcept { return class_names_; }
    const std::string& label_column() const noexcept { return label_column_; }
    /// Label text for row i as it appeared in the source file, or the class name.
    const std::string& label_text(std::size_t i) const;

    Dataset subset(std::span<const std::size_t> indices) const;
    /// Copy with `rows` appended under label `l`.
    Dataset with_appended(const Matrix& rows, Label l) const;

    friend bool operator==(const Dataset& a, const Dataset& b) {
        return a.features_ == b.features_ && a.labels_ == b.labels_;
    }

private:
    Matrix features_;
    std::vector<Label> labels_;
    std::vector<std::string> feature_names_;
    ClassNames class_names_;
    std::vector<std::string> source_labels_;
    std::string label_column_;
    std::size_t n_minority_ = 0;
};

struct BinaryLabels {
    std::vector<Label> labels;
    ClassNames names;
};

/// Smallest class becomes the minority, everything else is merged into the
/// majority. Count ties go to the lexicographically smallest label.
BinaryLabels binarize_keep_smallest(const std::vector<std::string>& labels);

struct CsvOptions {
    char delimiter = ',';
    /// Label column by header name; takes precedence over label_index.
    std::optional<std::string> label_name;
    /// Label column by zero-based index; the last column when neither is set.
    std::optional<std::size_t> label_index;
    std::optional<std::string> minority_label;
};

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset parse_csv(std::istream& in, const CsvOptions& options = {});

/// Writes header + rows; the label column is written last.
void write_csv(const Dataset& d, std::ostream& out, char delimiter = ',');
void write_csv(const Dataset& d, const std::filesystem::path& path, char delimiter = ',');

/// Shortest round-trip decimal representation.
std::string format_double(double v);

/// Per-feature min-max scaling to [0, 1]; constant columns map to 0.
Dataset min_max_scale(const Dataset& d);

struct FoldPlan {
    std::size_t rounds = 0;
    std::size_t folds = 0;
    std::uint64_t seed = 0;
    /// assignments[round][sample] = fold index.
    std::vector<std::vector<std::uint32_t>> assignments;

    std::vector<std::size_t> test_indices(std::size_t round, std::size_t fold) const;
    std::vector<std::size_t> train_indices(std::size_t round, std::size_t fold) const;

    friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

/// Per-class shuffle, then round-robin fold assignment continued across
/// classes so overall fold sizes differ by at most one.
FoldPlan stratified_folds(const Dataset& d, std::size_t rounds, std::size_t folds, std::uint64_t seed);

/// Two isotropic unit-variance Gaussians on the horizontal axis: minority
/// centred at the origin, majority at (separation, 0).
Dataset make_two_gaussian_fixture(std::size_t n_major = 2000, std::size_t n_minor = 400,
                                  double separation = 3.0, std::uint64_t seed = 1);

}  // namespace cgmos
