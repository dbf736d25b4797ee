#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "cgmos/dataset.hpp"
#include "cgmos/error.hpp"

using namespace cgmos;

namespace {

Dataset parse(const std::string& text, CsvOptions o = {}) {
    std::istringstream in(text);
    return parse_csv(in, o);
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::Verification;
}

Dataset line_dataset(std::size_t n, std::size_t n_minor) {
    Matrix x(n, 1);
    std::vector<Label> y(n, Label::Majority);
    for (std::size_t i = 0; i < n; ++i) {
        x(i, 0) = static_cast<double>(i);
        if (i < n_minor) y[i] = Label::Minority;
    }
    return Dataset(std::move(x), std::move(y));
}

}  // namespace

TEST(Csv, ExplicitMinorityLabel) {
    auto d = parse("f,label\n1,a\n2,a\n3,b\n", {.label_name = "label", .minority_label = "b"});
    ASSERT_EQ(d.size(), 3u);
    EXPECT_EQ(d.count(Label::Minority), 1u);
    EXPECT_EQ(d.label(2), Label::Minority);
    EXPECT_EQ(d.class_names().minority, "b");
}

TEST(Csv, MultiClassKeepsSmallest) {
    std::string text = "f,y\n";
    const char* labels[] = {"a", "a", "a", "a", "a", "b", "b", "b", "c", "c"};
    for (int i = 0; i < 10; ++i) text += std::to_string(i) + "," + labels[i] + "\n";
    auto d = parse(text);
    EXPECT_EQ(d.size(), 10u);
    EXPECT_EQ(d.count(Label::Minority), 2u);
    EXPECT_EQ(d.class_names().minority, "c");
    EXPECT_EQ(d.class_names().majority, "a|b");
    EXPECT_EQ(d.label(8), Label::Minority);
    EXPECT_EQ(d.label(5), Label::Majority);
}

TEST(Csv, SingleClassIsDegenerate) {
    EXPECT_EQ(kind_of([] { parse("f,y\n1,a\n2,a\n"); }), ErrorKind::DegenerateDataset);
}

TEST(Csv, NonNumericCellNamesRowAndColumn) {
    try {
        parse("width,y\n1,a\nx,b\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parse);
        const std::string msg = e.what();
        EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
        EXPECT_NE(msg.find("width"), std::string::npos) << msg;
    }
}

TEST(Csv, MissingValueRejected) {
    EXPECT_EQ(kind_of([] { parse("f,g,y\n1,,a\n2,3,b\n"); }), ErrorKind::Parse);
}

TEST(Csv, RaggedRowRejected) {
    EXPECT_EQ(kind_of([] { parse("f,g,y\n1,2,a\n2,b\n"); }), ErrorKind::Parse);
}

TEST(Csv, LabelColumnByIndexAndDelimiter) {
    auto d = parse("y;f\na;1\nb;2\na;3\n", {.delimiter = ';', .label_index = 0});
    EXPECT_EQ(d.dims(), 1u);
    EXPECT_EQ(d.features()(2, 0), 3.0);
    EXPECT_EQ(d.label(1), Label::Minority);
}

TEST(Csv, MinorityLabelMustBeSmallerClass) {
    EXPECT_EQ(kind_of([] { parse("f,y\n1,a\n2,a\n3,b\n", {.minority_label = "a"}); }), ErrorKind::Parameter);
}

TEST(Csv, WriteThenReadRoundTrips) {
    auto d = parse("p,q,y\n0.1,1e-300,a\n-2.5,3,b\n7,8,a\n");
    std::ostringstream out;
    write_csv(d, out);
    auto back = parse(out.str());
    EXPECT_EQ(back, d);
    EXPECT_EQ(out.str(), "p,q,y\n0.1,1e-300,a\n-2.5,3,b\n7,8,a\n");
}

TEST(Binarize, Examples) {
    EXPECT_EQ(binarize_keep_smallest({"a", "a", "a", "a", "a", "b", "b", "b", "c", "c"}).names.minority, "c");
    EXPECT_EQ(binarize_keep_smallest({"a", "b"}).names.minority, "a");
    std::vector<std::string> v;
    for (int i = 0; i < 4; ++i) v.push_back("a");
    for (int i = 0; i < 4; ++i) v.push_back("b");
    for (int i = 0; i < 9; ++i) v.push_back("c");
    EXPECT_EQ(binarize_keep_smallest(v).names.minority, "a");
}

TEST(Binarize, SingleLabelIsDegenerate) {
    EXPECT_EQ(kind_of([] { binarize_keep_smallest({"a", "a"}); }), ErrorKind::DegenerateDataset);
}

TEST(Binarize, IdempotentOnBinary) {
    std::vector<std::string> v{"x", "y", "y", "x", "y"};
    auto first = binarize_keep_smallest(v);
    std::vector<std::string> again;
    for (auto l : first.labels) again.push_back(l == Label::Minority ? first.names.minority : first.names.majority);
    auto second = binarize_keep_smallest(again);
    EXPECT_EQ(first.labels, second.labels);
}

TEST(DatasetInvariants, PartitionCoversAll) {
    auto d = line_dataset(11, 4);
    auto p = d.partition();
    std::set<std::size_t> all(p.minority_indices.begin(), p.minority_indices.end());
    all.insert(p.majority_indices.begin(), p.majority_indices.end());
    EXPECT_EQ(all.size(), 11u);
    EXPECT_EQ(p.minority_indices.size() + p.majority_indices.size(), 11u);
    EXPECT_DOUBLE_EQ(p.imbalance_ratio, 4.0 / 7.0);
    EXPECT_GT(p.imbalance_ratio, 0.0);
    EXPECT_LE(p.imbalance_ratio, 1.0);
}

TEST(DatasetInvariants, NonFiniteRejected) {
    Matrix x(2, 1);
    x(0, 0) = std::nan("");
    EXPECT_EQ(kind_of([&] { Dataset(x, {Label::Majority, Label::Minority}); }), ErrorKind::Parse);
}

TEST(Folds, FourFoldsOneMinorityEach) {
    auto d = line_dataset(20, 4);
    auto plan = stratified_folds(d, 3, 4, 9);
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t f = 0; f < 4; ++f) {
            std::size_t minority = 0;
            for (auto i : plan.test_indices(r, f)) minority += d.label(i) == Label::Minority;
            EXPECT_EQ(minority, 1u);
            EXPECT_EQ(plan.test_indices(r, f).size(), 5u);
        }
    }
}

TEST(Folds, TooFewMinorityIsInfeasible) {
    auto d = line_dataset(30, 8);
    EXPECT_EQ(kind_of([&] { stratified_folds(d, 1, 10, 1); }), ErrorKind::InfeasibleStratification);
}

TEST(Folds, Deterministic) {
    auto d = line_dataset(57, 13);
    EXPECT_EQ(stratified_folds(d, 10, 10, 42), stratified_folds(d, 10, 10, 42));
    EXPECT_NE(stratified_folds(d, 10, 10, 42), stratified_folds(d, 10, 10, 43));
}

TEST(Folds, StratificationProperties) {
    for (std::size_t n_minor : {10u, 13u, 29u}) {
        auto d = line_dataset(97, n_minor);
        auto plan = stratified_folds(d, 4, 10, n_minor);
        for (std::size_t r = 0; r < 4; ++r) {
            std::vector<std::size_t> seen(d.size(), 0);
            std::size_t lo = SIZE_MAX, hi = 0, mlo = SIZE_MAX, mhi = 0;
            for (std::size_t f = 0; f < 10; ++f) {
                const auto test = plan.test_indices(r, f);
                std::size_t minority = 0;
                for (auto i : test) {
                    ++seen[i];
                    minority += d.label(i) == Label::Minority;
                }
                lo = std::min(lo, test.size());
                hi = std::max(hi, test.size());
                mlo = std::min(mlo, minority);
                mhi = std::max(mhi, minority);
                EXPECT_GE(minority, 1u);
                EXPECT_GE(test.size() - minority, 1u);
                EXPECT_EQ(plan.train_indices(r, f).size() + test.size(), d.size());
            }
            for (auto s : seen) EXPECT_EQ(s, 1u);
            EXPECT_LE(hi - lo, 1u);
            EXPECT_LE(mhi - mlo, 1u);
        }
    }
}

TEST(Fixture, ShapeAndRatio) {
    auto d = make_two_gaussian_fixture(2000, 400, 3.0, 5);
    EXPECT_EQ(d.size(), 2400u);
    EXPECT_EQ(d.dims(), 2u);
    EXPECT_DOUBLE_EQ(d.imbalance_ratio(), 0.2);
    double mx[2] = {0, 0};
    for (std::size_t i = 0; i < d.size(); ++i) mx[static_cast<int>(d.label(i))] += d.features()(i, 0);
    EXPECT_NEAR(mx[0] / 2000.0, 3.0, 0.15);
    EXPECT_NEAR(mx[1] / 400.0, 0.0, 0.2);
}

TEST(Fixture, ZeroSeparationAndDeterminism) {
    auto d = make_two_gaussian_fixture(50, 10, 0.0, 3);
    EXPECT_EQ(d.size(), 60u);
    EXPECT_EQ(make_two_gaussian_fixture(50, 10, 3.0, 3), make_two_gaussian_fixture(50, 10, 3.0, 3));
    EXPECT_EQ(kind_of([] { make_two_gaussian_fixture(1, 10, 3.0, 3); }), ErrorKind::Parameter);
}

TEST(Scaling, MinMax) {
    Matrix x(3, 2);
    x(0, 0) = 1; x(1, 0) = 3; x(2, 0) = 2;
    x(0, 1) = 5; x(1, 1) = 5; x(2, 1) = 5;
    auto s = min_max_scale(Dataset(x, {Label::Majority, Label::Minority, Label::Majority}));
    EXPECT_EQ(s.features()(0, 0), 0.0);
    EXPECT_EQ(s.features()(1, 0), 1.0);
    EXPECT_EQ(s.features()(2, 0), 0.5);
    EXPECT_EQ(s.features()(1, 1), 0.0);
}
