// cgmos: command-line front end for resampling, evaluation, sweeps, theory
// verification and significance testing.
//
// Exit codes:
//   0  success (signtest: p < 0.05)
//   1  unexpected internal error
//   2  parse error (command line, CSV, JSON)
//   3  parameter error or dimension mismatch
//   4  infeasible request (degenerate dataset, stratification, synthesis)
//   5  verification failure (theory suite, leakage guard)
//   6  I/O error
//   7  insufficient data
//   8  division guard tripped
//   10 signtest ran but p >= 0.05

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cgmos/dataset.hpp"
#include "cgmos/error.hpp"
#include "cgmos/evaluation.hpp"
#include "cgmos/report.hpp"
#include "cgmos/theory.hpp"
#include "cgmos/wilcoxon.hpp"

namespace fs = std::filesystem;
using namespace cgmos;

namespace {

constexpr int kExitNotSignificant = 10;
constexpr const char* kOutDirEnv = "CGMOS_OUT_DIR";

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::Parse: return 2;
        case ErrorKind::Parameter:
        case ErrorKind::DimensionMismatch: return 3;
        case ErrorKind::DegenerateDataset:
        case ErrorKind::InfeasibleStratification:
        case ErrorKind::InfeasibleSynthesis: return 4;
        case ErrorKind::Verification: return 5;
        case ErrorKind::Io: return 6;
        case ErrorKind::InsufficientData: return 7;
        case ErrorKind::DivisionGuard: return 8;
    }
    return 1;
}

struct RunConfig {
    std::string command;
    std::string input;
    std::string label_col;
    std::string minority_label;
    std::string delimiter = ",";
    std::vector<std::string> methods{"cgmos"};
    std::optional<std::size_t> n_synthetic;
    double k_factor = 1.0;
    std::size_t q = 5;
    double sigma = 1.0;
    std::size_t k_interp = 5;
    std::size_t k_danger = 5;
    std::string seed_pool = "all";
    bool refresh_weights = false;
    std::vector<std::string> classifiers{"b_kde"};
    std::size_t knn_k = 5;
    std::size_t rounds = 10;
    std::size_t folds = 10;
    std::uint64_t seed = 1;
    std::string out;
    bool scale = false;
    std::vector<double> k_grid;
    // verify-theory
    std::size_t n_datasets = 100;
    bool no_fixture = false;
    std::string fault = "none";
    // signtest / grade
    std::vector<std::string> reports;
    std::string wilcoxon = "auto";
    std::string scores;
};

Json echo(const RunConfig& c) {
    Json j = {{"command", c.command}};
    if (c.command == "resample" || c.command == "evaluate" || c.command == "sweep") {
        j["input"] = c.input;
        j["label_col"] = c.label_col.empty() ? Json(nullptr) : Json(c.label_col);
        j["minority_label"] = c.minority_label.empty() ? Json(nullptr) : Json(c.minority_label);
        j["delimiter"] = c.delimiter;
        j["scale"] = c.scale;
        j["methods"] = c.methods;
        j["n_synthetic"] = c.n_synthetic ? Json(*c.n_synthetic) : Json(nullptr);
        j["k_factor"] = c.k_factor;
        j["q"] = c.q;
        j["sigma"] = c.sigma;
        j["k_interp"] = c.k_interp;
        j["k_danger"] = c.k_danger;
        j["seed_pool"] = c.seed_pool;
        j["refresh_weights"] = c.refresh_weights;
    }
    if (c.command == "evaluate" || c.command == "sweep") {
        j["classifiers"] = c.classifiers;
        j["knn_k"] = c.knn_k;
        j["rounds"] = c.rounds;
        j["folds"] = c.folds;
    }
    if (c.command == "sweep") j["k_grid"] = c.k_grid;
    if (c.command == "verify-theory") {
        j["n_datasets"] = c.n_datasets;
        j["include_fixture"] = !c.no_fixture;
        j["q"] = c.q;
        j["sigma"] = c.sigma;
        j["inject_fault"] = c.fault;
    }
    if (c.command == "signtest") {
        j["reports"] = c.reports;
        j["wilcoxon"] = c.wilcoxon;
    }
    if (c.command == "grade") {
        j["scores"] = c.scores;
        j["minority_label"] = c.minority_label.empty() ? Json(nullptr) : Json(c.minority_label);
    }
    j["seed"] = c.seed;
    j["out"] = c.out;
    return j;
}

Json envelope(const RunConfig& c) { return {{"version", version_string()}, {"config", echo(c)}}; }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

DensityParams density_params(const RunConfig& c) {
    DensityParams p;
    p.q = c.q;
    p.sigma = c.sigma;
    return p;
}

Method method_from(const std::string& s) {
    const auto m = parse_method(s);
    if (!m) fail(ErrorKind::Parameter, "unknown method '" + s + "'");
    return *m;
}

ClassifierParams classifier_from(const std::string& s, const RunConfig& c) {
    ClassifierParams p;
    if (s == "b_kde" || s == "bkde" || s == "b-kde") p.kind = ClassifierKind::BKde;
    else if (s == "knn") p.kind = ClassifierKind::Knn;
    else fail(ErrorKind::Parameter, "unknown classifier '" + s + "'");
    p.density = density_params(c);
    p.knn_k = c.knn_k;
    return p;
}

OversamplerSpec oversampler_from(const std::string& method, const RunConfig& c) {
    OversamplerSpec s;
    s.method = method_from(method);
    s.n_synthetic = c.n_synthetic;
    s.k_factor = c.k_factor;
    s.k_interp = c.k_interp;
    s.k_danger = c.k_danger;
    s.density = density_params(c);
    s.refresh_weights = c.refresh_weights;
    if (c.seed_pool == "all") s.seed_pool = SeedPool::AllSamples;
    else if (c.seed_pool == "minority") s.seed_pool = SeedPool::MinorityOnly;
    else fail(ErrorKind::Parameter, "seed pool must be 'all' or 'minority'");
    return s;
}

Dataset load_input(const RunConfig& c) {
    if (c.input.empty()) fail(ErrorKind::Parameter, "--input is required");
    if (c.delimiter.size() != 1) fail(ErrorKind::Parameter, "--delimiter must be a single character");
    CsvOptions o;
    o.delimiter = c.delimiter[0];
    if (!c.label_col.empty()) {
        const bool numeric = c.label_col.find_first_not_of("0123456789") == std::string::npos;
        if (numeric) o.label_index = std::stoull(c.label_col);
        else o.label_name = c.label_col;
    }
    if (!c.minority_label.empty()) o.minority_label = c.minority_label;
    Dataset d = load_csv(c.input, o);
    return c.scale ? min_max_scale(d) : d;
}

fs::path out_dir(const RunConfig& c) { return fs::path(c.out); }

int cmd_resample(const RunConfig& c) {
    if (c.methods.size() != 1) fail(ErrorKind::Parameter, "resample takes exactly one --method");
    const Dataset d = load_input(c);
    const auto spec = oversampler_from(c.methods.front(), c);
    const auto result = apply_oversampler(d, spec, c.seed);

    std::ostringstream data_csv, weight_csv;
    write_csv(result.data, data_csv, c.delimiter[0]);
    write_weight_csv(result.weights, weight_csv);
    Json meta = envelope(c);
    meta["summary"] = {{"n_input", d.size()},
                       {"n_output", result.data.size()},
                       {"n_synthetic", result.data.size() - d.size()},
                       {"weight_normalizer", result.weights.normalizer},
                       {"uniform_fallback", result.weights.uniform_fallback}};
    write_text_file(out_dir(c) / "resampled.csv", data_csv.str());
    write_text_file(out_dir(c) / "weights.csv", weight_csv.str());
    write_text_file(out_dir(c) / "config.json", dump(meta));
    return 0;
}

int cmd_evaluate(const RunConfig& c) {
    const Dataset d = load_input(c);
    const auto plan = stratified_folds(d, c.rounds, c.folds, c.seed);
    for (const auto& m : c.methods) {
        const auto spec = oversampler_from(m, c);
        for (const auto& k : c.classifiers) {
            const auto cls = classifier_from(k, c);
            const auto report = cross_validate(d, spec, cls, plan, c.seed);
            const std::string stem = std::string(to_string(spec.method)) + "_" + std::string(to_string(cls.kind));
            Json j = envelope(c);
            j["report"] = to_json(report);
            std::ostringstream roc;
            write_roc_csv(report.roc, roc);
            write_text_file(out_dir(c) / ("report_" + stem + ".json"), dump(j));
            write_text_file(out_dir(c) / ("roc_" + stem + ".csv"), roc.str());
            std::cout << stem << " auc=" << format_double(report.auc) << " failed_folds=" << report.failed_folds << "\n";
        }
    }
    return 0;
}

int cmd_sweep(const RunConfig& c) {
    const Dataset d = load_input(c);
    const auto plan = stratified_folds(d, c.rounds, c.folds, c.seed);
    std::vector<Method> methods;
    for (const auto& m : c.methods) methods.push_back(method_from(m));
    const auto grid = c.k_grid.empty() ? default_k_grid() : c.k_grid;
    const auto base = oversampler_from(c.methods.front(), c);

    std::ostringstream csv;
    csv << "method,classifier,k,mean_auc,failed_folds\n";
    for (const auto& k : c.classifiers) {
        const auto cls = classifier_from(k, c);
        for (const auto& row : sweep_k_delta(d, methods, cls, grid, plan, c.seed, base)) {
            csv << to_string(row.method) << ',' << to_string(cls.kind) << ',' << format_double(row.k) << ','
                << format_double(row.mean_auc) << ',' << row.failed_folds << '\n';
        }
    }
    RunConfig echoed = c;
    echoed.k_grid = grid;
    write_text_file(out_dir(c) / "sweep.csv", csv.str());
    write_text_file(out_dir(c) / "sweep_config.json", dump(envelope(echoed)));
    return 0;
}

int cmd_verify_theory(const RunConfig& c) {
    theory::SuiteOptions o;
    o.n_datasets = c.n_datasets;
    o.seed = c.seed;
    o.include_fixture = !c.no_fixture;
    o.density = density_params(c);
    if (c.fault == "none") o.fault = theory::Fault::None;
    else if (c.fault == "uniform_weights") o.fault = theory::Fault::UniformWeights;
    else if (c.fault == "negative_weight") o.fault = theory::Fault::NegativeWeight;
    else fail(ErrorKind::Parameter, "unknown fault '" + c.fault + "'");

    const auto cert = theory::run_suite(o);
    Json j = envelope(c);
    j["certificate"] = to_json(cert);
    write_text_file(out_dir(c) / "certificate.json", dump(j));

    std::size_t equalities = 0;
    for (const auto& check : cert.checks) equalities += check.equality ? 1 : 0;
    std::cout << "datasets=" << cert.checks.size() << " equality=" << equalities
              << " max_ratio_residual=" << format_double(cert.max_ratio_residual)
              << " max_gain_weight_residual=" << format_double(cert.max_gain_weight_residual) << "\n";
    if (!cert.passed()) {
        for (const auto& name : cert.failed_properties) std::cerr << "failed property: " << name << "\n";
        return exit_code(ErrorKind::Verification);
    }
    std::cout << "all properties hold\n";
    return 0;
}

std::vector<FoldAuc> load_fold_aucs(const std::string& path) {
    Json j;
    try {
        j = Json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorKind::Parse, path + ": " + e.what());
    }
    return read_fold_aucs(j.contains("report") ? j["report"] : j);
}

int cmd_signtest(const RunConfig& c) {
    if (c.reports.size() != 2) fail(ErrorKind::Parameter, "signtest takes two report paths");
    const auto a = load_fold_aucs(c.reports[0]);
    const auto b = load_fold_aucs(c.reports[1]);
    if (a.size() != b.size()) fail(ErrorKind::Parameter, "reports have different fold counts");
    std::vector<double> xa, xb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].round != b[i].round || a[i].fold != b[i].fold) {
            fail(ErrorKind::Parameter, "reports have mismatched fold structure at entry " + std::to_string(i));
        }
        if (a[i].failed || b[i].failed) continue;
        xa.push_back(a[i].auc);
        xb.push_back(b[i].auc);
    }
    WilcoxonMethod m = WilcoxonMethod::Auto;
    if (c.wilcoxon == "exact") m = WilcoxonMethod::Exact;
    else if (c.wilcoxon == "normal") m = WilcoxonMethod::Normal;
    else if (c.wilcoxon != "auto") fail(ErrorKind::Parameter, "--wilcoxon must be auto, exact or normal");
    const auto r = wilcoxon_signed_rank(xa, xb, m);
    std::cout << "n=" << r.n << " w_plus=" << format_double(r.w_plus) << " w_minus=" << format_double(r.w_minus)
              << " statistic=" << format_double(r.statistic) << " p=" << format_double(r.p_value)
              << " method=" << (r.exact ? "exact" : "normal") << "\n";
    return r.p_value < 0.05 ? 0 : kExitNotSignificant;
}

int cmd_grade(const RunConfig& c) {
    std::ifstream in(c.scores, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open " + c.scores);
    const auto samples = read_score_file(in);
    const auto g = grade_scores(samples, c.minority_label.empty() ? std::nullopt : std::optional(c.minority_label));
    Json j = envelope(c);
    j["grade"] = to_json(g);
    write_text_file(out_dir(c) / "grade.json", dump(j));
    std::cout << "auc=" << format_double(g.roc.auc) << "\n";
    return 0;
}

int cmd_fixture(const RunConfig& c) {
    std::ostringstream csv;
    write_csv(make_two_gaussian_fixture(2000, 400, 3.0, c.seed), csv);
    write_text_file(out_dir(c) / "fixture.csv", csv.str());
    return 0;
}

void add_data_options(CLI::App* s, RunConfig& c) {
    s->add_option("--input", c.input, "Input CSV")->required();
    s->add_option("--label-col", c.label_col, "Label column name or zero-based index (default: last)");
    s->add_option("--minority-label", c.minority_label, "Label value treated as minority (default: rarest)");
    s->add_option("--delimiter", c.delimiter, "CSV delimiter");
    s->add_flag("--scale", c.scale, "Min-max scale features to [0, 1] before use");
}

void add_density_options(CLI::App* s, RunConfig& c) {
    s->add_option("--q", c.q, "Neighbours averaged per bandwidth")->check(CLI::PositiveNumber);
    s->add_option("--sigma", c.sigma, "Bandwidth scale")->check(CLI::PositiveNumber);
}

void add_oversampling_options(CLI::App* s, RunConfig& c) {
    s->add_option("--n-synthetic", c.n_synthetic, "Synthetic samples to add (overrides --k-factor)");
    s->add_option("--k-factor", c.k_factor, "Synthetic amount as a multiple of the class gap")->check(CLI::NonNegativeNumber);
    s->add_option("--k-interp", c.k_interp, "Minority neighbours for interpolation")->check(CLI::PositiveNumber);
    s->add_option("--k-danger", c.k_danger, "Neighbours for the borderline danger test")->check(CLI::PositiveNumber);
    s->add_option("--seed-pool", c.seed_pool, "Seed pool for cgmos: all or minority");
    s->add_flag("--refresh-weights", c.refresh_weights, "Recompute cgmos weights in ten chunks");
}

void add_cv_options(CLI::App* s, RunConfig& c) {
    s->add_option("--classifier", c.classifiers, "Classifiers: b_kde, knn")->delimiter(',');
    s->add_option("--knn-k", c.knn_k, "Neighbours for knn")->check(CLI::PositiveNumber);
    s->add_option("--rounds", c.rounds, "Cross-validation rounds")->check(CLI::PositiveNumber);
    s->add_option("--folds", c.folds, "Folds per round")->check(CLI::Range(2, 1000000));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certainty guided minority oversampling"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    RunConfig c;
    if (const char* env = std::getenv(kOutDirEnv); env && *env) c.out = env;
    else c.out = "out";

    auto out_opt = [&](CLI::App* s) {
        s->add_option("--out", c.out, std::string("Output directory (env ") + kOutDirEnv + ")");
        s->add_option("--seed", c.seed, "Master RNG seed");
    };

    auto* resample = app.add_subcommand("resample", "Oversample a dataset and export weights");
    add_data_options(resample, c);
    add_density_options(resample, c);
    add_oversampling_options(resample, c);
    resample->add_option("--method", c.methods, "none, dup, smote, borderline_smote, adasyn, cgmos")->expected(1);
    out_opt(resample);

    auto* evaluate = app.add_subcommand("evaluate", "Repeated stratified cross-validation");
    add_data_options(evaluate, c);
    add_density_options(evaluate, c);
    add_oversampling_options(evaluate, c);
    add_cv_options(evaluate, c);
    evaluate->add_option("--method", c.methods, "Comma-separated methods")->delimiter(',');
    out_opt(evaluate);

    auto* sweep = app.add_subcommand("sweep", "AUC against synthetic amount k * gap");
    add_data_options(sweep, c);
    add_density_options(sweep, c);
    add_oversampling_options(sweep, c);
    add_cv_options(sweep, c);
    sweep->add_option("--method", c.methods, "Comma-separated methods")->delimiter(',');
    sweep->add_option("--k-grid", c.k_grid, "Comma-separated k values (default 0.5..5 step 0.5)")->delimiter(',');
    out_opt(sweep);

    auto* verify = app.add_subcommand("verify-theory", "Run the expected-gain property suite");
    add_density_options(verify, c);
    verify->add_option("--n-datasets", c.n_datasets, "Random datasets in the corpus");
    verify->add_flag("--no-fixture", c.no_fixture, "Skip the two-Gaussian fixture");
    verify->add_option("--inject-fault", c.fault, "none, uniform_weights, negative_weight");
    out_opt(verify);

    auto* signtest = app.add_subcommand("signtest", "Wilcoxon signed-rank test on per-fold AUCs of two reports");
    signtest->add_option("reports", c.reports, "Two report JSON files")->expected(2)->required();
    signtest->add_option("--wilcoxon", c.wilcoxon, "auto, exact or normal");

    auto* grade = app.add_subcommand("grade", "Score an external row_id,score,label file");
    grade->add_option("--scores", c.scores, "Score CSV")->required();
    grade->add_option("--minority-label", c.minority_label, "Minority label (default: rarest)");
    grade->add_option("--out", c.out, std::string("Output directory (env ") + kOutDirEnv + ")");

    auto* fixture = app.add_subcommand("fixture", "Write the two-Gaussian fixture as CSV");
    out_opt(fixture);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*resample) return (c.command = "resample", cmd_resample(c));
        if (*evaluate) return (c.command = "evaluate", cmd_evaluate(c));
        if (*sweep) return (c.command = "sweep", cmd_sweep(c));
        if (*verify) return (c.command = "verify-theory", cmd_verify_theory(c));
        if (*signtest) return (c.command = "signtest", cmd_signtest(c));
        if (*grade) return (c.command = "grade", cmd_grade(c));
        if (*fixture) return (c.command = "fixture", cmd_fixture(c));
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
