// Acceptance suite. One line per criterion; exit status is the number of failures.
//
// Optional: set CODEORIGIN_BENCH_TRAIN and CODEORIGIN_BENCH_TEST to JSONL files of the
// full external benchmark to run the large-scale check; otherwise it is skipped.

#include "codeorigin/codeorigin.h"
#include "codeorigin/corpus.hpp"
#include "codeorigin/forest.hpp"
#include "codeorigin/logistic.hpp"
#include "codeorigin/metrics.hpp"
#include "codeorigin/model.hpp"
#include "codeorigin/pipeline.hpp"
#include "codeorigin/report.hpp"
#include "codeorigin/stylometry.hpp"

#include "support/golden.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace codeorigin;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr double kMetricTol = 1e-9;
constexpr double kMetricBudgetSec = 10.0;
constexpr double kThresholdBudgetSec = 5.0;
constexpr double kGradientTol = 1e-5;
constexpr double kFiniteDiffStep = 1e-5;
constexpr double kSyntheticAucFloor = 0.95;
constexpr double kSyntheticBudgetSec = 60.0;
constexpr std::size_t kSyntheticPerClass = 2000;
constexpr std::uint64_t kSeed = 42;
constexpr double kBenchRocFloor = 0.98;
constexpr double kBenchF1Floor = 0.94;

int failures = 0;

void report(const char* name, bool pass, const std::string& detail)
{
    std::printf("[%s] %-28s %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!pass)
        ++failures;
}

void guarded(const char* name, const std::function<void()>& body)
{
    try {
        body();
    } catch (const std::exception& e) {
        report(name, false, std::string("exception: ") + e.what());
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void metric_oracle()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(kSeed);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const auto set = oracle::random_scored_set(rng, 200);
        const evaluation::ScoredSet s{set.scores, set.labels};
        worst = std::max(worst, std::abs(evaluation::roc_auc(s) - oracle::pairwise_auc(set.scores, set.labels)));
        worst = std::max(worst, std::abs(evaluation::pr_auc(s) - oracle::rank_walk_ap(set.scores, set.labels)));
    }
    const double dt = seconds_since(t0);
    report("metric-oracle", worst <= kMetricTol && dt < kMetricBudgetSec,
           fmt("500 sets, max |diff| %.3g (tol %.0e), %.2fs", worst, kMetricTol, dt));
}

void threshold_optimality()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(kSeed + 1);
    int beaten = 0, wrong_tie = 0;
    for (int i = 0; i < 200; ++i) {
        const auto set = oracle::random_scored_set(rng, 200);
        const double tau = evaluation::calibrate_threshold({set.scores, set.labels});
        const auto sweep = oracle::exhaustive_f1(set.scores, set.labels);
        if (oracle::f1_at(set.scores, set.labels, tau) < sweep.best_f1)
            ++beaten;
        if (tau != sweep.largest_best_candidate)
            ++wrong_tie;
    }
    const double dt = seconds_since(t0);
    report("threshold-optimality", beaten == 0 && wrong_tie == 0 && dt < kThresholdBudgetSec,
           fmt("200 sets, %g beaten, %g tie-break misses, %.2fs", beaten, wrong_tie, dt));
}

void gradient_check()
{
    std::mt19937_64 rng(kSeed + 2);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 32, d = 5;
        Matrix X(n, d);
        std::vector<std::vector<double>> rows(n, std::vector<double>(d));
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < d; ++j)
                rows[i][j] = X(i, j) = g(rng);
            y[i] = static_cast<int>(rng() & 1);
        }
        learners::LinearModel m{std::vector<double>(d), g(rng)};
        for (auto& w : m.weights)
            w = g(rng);
        const double l2 = 1e-4;
        const auto grad = learners::logistic_gradient(m, X, y, l2);
        double diff = 0, norm = 0;
        for (std::size_t j = 0; j <= d; ++j) {
            auto wp = m.weights, wm = m.weights;
            double bp = m.bias, bm = m.bias;
            if (j < d)
                wp[j] += kFiniteDiffStep, wm[j] -= kFiniteDiffStep;
            else
                bp += kFiniteDiffStep, bm -= kFiniteDiffStep;
            const double numeric =
                (oracle::bce(wp, bp, rows, y, l2) - oracle::bce(wm, bm, rows, y, l2)) / (2 * kFiniteDiffStep);
            const double analytic = j < d ? grad.weights[j] : grad.bias;
            diff += (numeric - analytic) * (numeric - analytic);
            norm += analytic * analytic;
        }
        worst = std::max(worst, std::sqrt(diff) / std::sqrt(norm));
    }
    report("gradient-check", worst < kGradientTol, fmt("100 instances (n=32, d=5), max rel err %.3g (tol %.0e)", worst,
                                                       kGradientTol));
}

void feature_golden()
{
    const auto cases = golden::cases();
    int mismatched = 0;
    std::string first_bad;
    for (const auto& c : cases) {
        const auto fv = stylometry::extract_features(c.code, c.language);
        for (std::size_t i = 0; i < stylometry::kFeatureCount; ++i) {
            const bool ok = i == golden::kEntropyIndex
                                ? std::abs(fv.values[i] - c.expected[i]) <= golden::kEntropyTolerance
                                : fv.values[i] == c.expected[i];
            if (!ok) {
                ++mismatched;
                if (first_bad.empty())
                    first_bad = c.name + "/" + std::string(stylometry::feature_schema()[i].name);
            }
        }
    }
    report("feature-golden", cases.size() >= 10 && mismatched == 0,
           std::to_string(cases.size()) + " snippets, " + std::to_string(mismatched) + " mismatched values" +
               (first_bad.empty() ? "" : " (first: " + first_bad + ")"));
}

void synthetic_end_to_end()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto data = testsupport::synthetic_corpus(kSyntheticPerClass, kSeed);
    const auto split = corpus::stratified_split(data, 0.2, kSeed);
    pipeline::TrainOptions opts; // rf, defaults
    opts.seed = kSeed;
    const auto result =
        pipeline::train(corpus::select(data, split.train), corpus::select(data, split.validation), opts);
    const double dt = seconds_since(t0);
    const auto& r = result.validation;
    report("synthetic-end-to-end",
           r.roc_auc >= kSyntheticAucFloor && r.pr_auc >= kSyntheticAucFloor && dt < kSyntheticBudgetSec,
           fmt("rf on 3200/800: ROC-AUC %.4f, PR-AUC %.4f, ", r.roc_auc, r.pr_auc) +
               fmt("F1 %.4f, %.1fs", r.f1, dt));

    const auto& forest = std::get<learners::ForestModel>(result.model.classifier);
    const auto imp = learners::feature_importance(forest);
    const auto names = pipeline::input_names(result.model);
    const auto ranked = evaluation::importance_ranking(imp, names);
    bool hit = false;
    std::string top;
    for (std::size_t i = 0; i < 3 && i < ranked.size(); ++i) {
        top += (i ? ", " : "") + ranked[i].name;
        hit |= ranked[i].name == "avg_leading_spaces" || ranked[i].name == "avg_leading_tabs" ||
               ranked[i].name == "blank_line_ratio";
    }
    report("importance-whitespace-top3", hit, "top 3: " + top);
}

struct Owned {
    char* p = nullptr;
    ~Owned() { co_string_free(p); }
};

void check(co_status s, const char* what)
{
    if (s != CO_OK)
        throw std::runtime_error(std::string(what) + ": " + co_last_error());
}

// split -> featurize -> train rf -> evaluate, all through the shared library.
void run_pipeline(const fs::path& dir, const fs::path& corpus_path, const fs::path& test_path)
{
    fs::create_directories(dir);
    co_dataset* all = nullptr;
    check(co_dataset_load(corpus_path.c_str(), 1, &all), "load");
    Owned manifest, csv, report_json, eval_json;
    check(co_split_manifest(all, 0.2, kSeed, &manifest.p), "split");
    std::ofstream(dir / "split.json", std::ios::binary) << manifest.p;
    check(co_featurize_csv(all, &csv.p), "featurize");
    std::ofstream(dir / "features.csv", std::ios::binary) << csv.p;

    co_dataset *train = nullptr, *val = nullptr, *test = nullptr;
    check(co_dataset_from_manifest(all, manifest.p, 0, &train), "manifest");
    check(co_dataset_from_manifest(all, manifest.p, 1, &val), "manifest");
    co_train_options* opts = co_train_options_new();
    check(co_train_options_set(opts, "model", "rf"), "option");
    check(co_train_options_set(opts, "seed", "42"), "option");
    co_model* model = nullptr;
    check(co_model_train(train, val, nullptr, opts, &model, &report_json.p), "train");
    std::ofstream(dir / "validation.json", std::ios::binary) << report_json.p;
    check(co_model_save(model, (dir / "model.json").c_str()), "save");
    check(co_dataset_load(test_path.c_str(), 1, &test), "load test");
    check(co_model_evaluate(model, test, nullptr, "test", 0, 0.0, &eval_json.p), "evaluate");
    std::ofstream(dir / "test.json", std::ios::binary) << eval_json.p;

    co_model_free(model);
    co_train_options_free(opts);
    for (auto* d : {all, train, val, test})
        co_dataset_free(d);
}

void determinism()
{
    const fs::path root = fs::temp_directory_path() / "codeorigin_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    testsupport::write_jsonl(testsupport::synthetic_corpus(300, 7), (root / "corpus.jsonl").string());
    testsupport::write_jsonl(testsupport::synthetic_corpus(100, 8), (root / "test.jsonl").string());
    run_pipeline(root / "a", root / "corpus.jsonl", root / "test.jsonl");
    run_pipeline(root / "b", root / "corpus.jsonl", root / "test.jsonl");
    int same = 0;
    std::string differing;
    for (const char* f : {"split.json", "features.csv", "model.json", "validation.json", "test.json"}) {
        const auto a = slurp(root / "a" / f);
        if (!a.empty() && a == slurp(root / "b" / f))
            ++same;
        else
            differing += std::string(" ") + f;
    }
    report("determinism", same == 5,
           std::to_string(same) + "/5 artifacts byte-identical across two seed-42 runs" +
               (differing.empty() ? "" : " (differ:" + differing + ")"));
}

void persistence()
{
    std::mt19937_64 rng(kSeed + 3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = 600, d = 20;
    Matrix X(n, d);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j)
            X(i, j) = u(rng);
        y[i] = (X(i, 3) + X(i, 11) > 1.0) != (u(rng) < 0.1);
    }
    Matrix probe(1000, d);
    std::normal_distribution<double> g(0.5, 0.7);
    for (std::size_t i = 0; i < 1000; ++i)
        for (std::size_t j = 0; j < d; ++j)
            probe(i, j) = g(rng);

    const fs::path dir = fs::temp_directory_path() / "codeorigin_acceptance";
    fs::create_directories(dir);
    int equal_types = 0;
    std::string bad;
    for (auto type : {learners::ModelType::logistic, learners::ModelType::random_forest,
                      learners::ModelType::extra_trees, learners::ModelType::hist_boosting}) {
        learners::TrainedModel m;
        m.type = type;
        m.feature_schema_version = std::string(stylometry::kSchemaVersion);
        m.n_features = d;
        m.threshold = 0.5;
        m.seed = kSeed;
        switch (type) {
        case learners::ModelType::logistic:
            m.scaler = learners::fit_scaler(X);
            m.classifier = learners::fit_logistic(learners::apply_scaler(*m.scaler, X), y).model;
            break;
        case learners::ModelType::random_forest:
        case learners::ModelType::extra_trees: {
            auto cfg = learners::default_forest_config(type == learners::ModelType::random_forest
                                                           ? learners::ForestVariant::random_forest
                                                           : learners::ForestVariant::extra_trees);
            cfg.n_trees = 100;
            m.classifier = learners::fit_forest(X, y, cfg);
            break;
        }
        case learners::ModelType::hist_boosting: {
            learners::BoostingConfig cfg;
            cfg.n_stages = 100;
            m.classifier = learners::fit_boosted(X, y, cfg).model;
            break;
        }
        }
        const auto path = dir / ("persist-" + std::string(learners::to_string(type)) + ".json");
        learners::save_model(m, path);
        const auto back = learners::load_model(path);
        const auto a = learners::predict_proba(m, probe, stylometry::kSchemaVersion);
        const auto b = learners::predict_proba(back, probe, stylometry::kSchemaVersion);
        bool ok = back.threshold == m.threshold;
        for (std::size_t i = 0; i < a.size(); ++i)
            ok &= std::bit_cast<std::uint64_t>(a[i]) == std::bit_cast<std::uint64_t>(b[i]);
        if (ok)
            ++equal_types;
        else
            bad += std::string(" ") + learners::to_string(type);
    }
    report("persistence", equal_types == 4,
           std::to_string(equal_types) + "/4 model types bit-equal on 1000 probes" +
               (bad.empty() ? "" : " (differ:" + bad + ")"));
}

void full_benchmark()
{
    const char* train_path = std::getenv("CODEORIGIN_BENCH_TRAIN");
    const char* test_path = std::getenv("CODEORIGIN_BENCH_TEST");
    if (!train_path || !test_path) {
        std::printf("[SKIP] %-28s set CODEORIGIN_BENCH_TRAIN and CODEORIGIN_BENCH_TEST to run\n", "full-benchmark");
        return;
    }
    const auto data = corpus::load_jsonl(train_path);
    const auto test = corpus::load_jsonl(test_path);
    const auto split = corpus::stratified_split(data, 0.2, kSeed);
    pipeline::TrainOptions opts;
    const auto result =
        pipeline::train(corpus::select(data, split.train), corpus::select(data, split.validation), opts);
    const auto r = pipeline::evaluate(result.model, test, "test");
    report("full-benchmark", r.roc_auc >= kBenchRocFloor && r.f1 >= kBenchF1Floor,
           fmt("ROC-AUC %.4f (>= %.2f), F1 %.4f", r.roc_auc, kBenchRocFloor, r.f1) +
               fmt(" (>= %.2f)", kBenchF1Floor));
}

} // namespace

int main()
{
    guarded("metric-oracle", metric_oracle);
    guarded("threshold-optimality", threshold_optimality);
    guarded("gradient-check", gradient_check);
    guarded("feature-golden", feature_golden);
    guarded("synthetic-end-to-end", synthetic_end_to_end);
    guarded("determinism", determinism);
    guarded("persistence", persistence);
    guarded("full-benchmark", full_benchmark);
    std::printf("%d failing\n", failures);
    return failures == 0 ? 0 : 1;
}
