// Exercises the shared library strictly through its C header.
#include "codeorigin/codeorigin.h"

#include "support/synthetic.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <cstring>
#include <filesystem>

namespace fs = std::filesystem;

namespace {

struct Owned {
    char* p = nullptr;
    ~Owned() { co_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

class CApi : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir = fs::temp_directory_path() / "codeorigin_capi";
        fs::create_directories(dir);
        path = (dir / "corpus.jsonl").string();
        testsupport::write_jsonl(testsupport::synthetic_corpus(60, 17), path);
        ASSERT_EQ(co_dataset_load(path.c_str(), 1, &all), CO_OK) << co_last_error();
        Owned manifest;
        ASSERT_EQ(co_split_manifest(all, 0.25, 42, &manifest.p), CO_OK);
        ASSERT_EQ(co_dataset_from_manifest(all, manifest.p, 0, &train), CO_OK);
        ASSERT_EQ(co_dataset_from_manifest(all, manifest.p, 1, &val), CO_OK);
    }
    void TearDown() override
    {
        co_dataset_free(all);
        co_dataset_free(train);
        co_dataset_free(val);
    }

    co_model* fit(const char* type)
    {
        co_train_options* opts = co_train_options_new();
        co_train_options_set(opts, "model", type);
        if (std::strcmp(type, "rf") == 0 || std::strcmp(type, "et") == 0)
            co_train_options_set(opts, "n_trees", "25");
        co_model* model = nullptr;
        Owned report;
        const auto status = co_model_train(train, val, nullptr, opts, &model, &report.p);
        co_train_options_free(opts);
        EXPECT_EQ(status, CO_OK) << co_last_error();
        return model;
    }

    fs::path dir;
    std::string path;
    co_dataset* all = nullptr;
    co_dataset* train = nullptr;
    co_dataset* val = nullptr;
};

} // namespace

TEST_F(CApi, DatasetBasics)
{
    EXPECT_EQ(co_dataset_size(all), 120u);
    EXPECT_EQ(co_dataset_size(train) + co_dataset_size(val), 120u);
    size_t h = 0, m = 0;
    co_dataset_class_balance(val, &h, &m);
    EXPECT_EQ(h, 15u);
    EXPECT_EQ(m, 15u);
    EXPECT_STREQ(co_dataset_id(all, 0), "h0");
    EXPECT_EQ(co_dataset_id(all, 999), nullptr);
}

TEST_F(CApi, ErrorCodes)
{
    co_dataset* ds = nullptr;
    EXPECT_EQ(co_dataset_load((dir / "missing.jsonl").c_str(), 1, &ds), CO_ERR_INPUT);
    EXPECT_NE(std::string(co_last_error()).find("missing.jsonl"), std::string::npos);
    EXPECT_EQ(ds, nullptr);
    EXPECT_EQ(co_dataset_load(nullptr, 1, &ds), CO_ERR_INPUT);

    Owned manifest;
    EXPECT_EQ(co_split_manifest(all, 0.0, 1, &manifest.p), CO_ERR_INPUT);
    EXPECT_EQ(manifest.p, nullptr);

    co_train_options* opts = co_train_options_new();
    EXPECT_EQ(co_train_options_set(opts, "model", "svm"), CO_ERR_INPUT);
    co_train_options_free(opts);
}

TEST_F(CApi, FeaturesMatchSchema)
{
    ASSERT_EQ(co_feature_count(), 20u);
    EXPECT_STREQ(co_feature_name(6), "avg_leading_spaces");
    EXPECT_EQ(co_feature_name(20), nullptr);
    EXPECT_STREQ(co_feature_schema_version(), "stylometry-v1");
    const char code[] = "def f(x):\n    return x\n";
    double out[20];
    ASSERT_EQ(co_extract_features(code, std::strlen(code), "python", out, 20), CO_OK);
    EXPECT_EQ(out[0], 2);
    EXPECT_EQ(out[1], 23);
    EXPECT_EQ(out[19], 1);
    EXPECT_EQ(co_extract_features(code, std::strlen(code), nullptr, out, 5), CO_ERR_INPUT);
    Owned csv;
    ASSERT_EQ(co_featurize_csv(all, &csv.p), CO_OK);
    EXPECT_EQ(std::count(csv.p, csv.p + std::strlen(csv.p), '\n'), 121);
}

TEST_F(CApi, TrainPredictEvaluatePersist)
{
    co_model* model = fit("rf");
    ASSERT_NE(model, nullptr);
    EXPECT_STREQ(co_model_id(model), "features-rf");
    EXPECT_STREQ(co_model_representation(model), "features");
    const double tau = co_model_threshold(model);

    const size_t n = co_dataset_size(all);
    std::vector<double> p(n);
    std::vector<int> v(n);
    ASSERT_EQ(co_model_predict(model, all, nullptr, 0, 0.0, p.data(), v.data(), n), CO_OK);
    for (size_t i = 0; i < n; ++i)
        EXPECT_EQ(v[i] == 1, p[i] >= tau);
    EXPECT_EQ(co_model_predict(model, all, nullptr, 0, 0.0, p.data(), v.data(), n - 1), CO_ERR_INPUT);

    Owned report;
    ASSERT_EQ(co_model_evaluate(model, val, nullptr, "heldout", 0, 0.0, &report.p), CO_OK);
    const auto doc = nlohmann::json::parse(report.str());
    EXPECT_EQ(doc["dataset"], "heldout");
    EXPECT_EQ(doc["threshold"], tau);
    Owned csv;
    ASSERT_EQ(co_report_to_csv(report.p, &csv.p), CO_OK);
    EXPECT_EQ(csv.str().rfind("model,dataset,threshold,", 0), 0u);

    const auto file = (dir / "rf.json").string();
    ASSERT_EQ(co_model_save(model, file.c_str()), CO_OK);
    co_model* back = nullptr;
    ASSERT_EQ(co_model_load(file.c_str(), &back), CO_OK);
    std::vector<double> q(n);
    ASSERT_EQ(co_model_predict(back, all, nullptr, 0, 0.0, q.data(), v.data(), n), CO_OK);
    EXPECT_EQ(p, q);

    std::vector<double> imp(20);
    ASSERT_EQ(co_model_importance(model, imp.data(), 20), CO_OK);
    double sum = 0;
    for (double x : imp)
        sum += x;
    EXPECT_NEAR(sum, 1.0, 1e-9);
    Owned icsv, svg;
    ASSERT_EQ(co_model_importance_chart(model, &icsv.p, &svg.p), CO_OK);
    EXPECT_NE(svg.str().find("<svg"), std::string::npos);

    co_model_free(back);
    co_model_free(model);
}

TEST_F(CApi, ImportanceNeedsForest)
{
    co_model* model = fit("lr");
    Owned csv, svg;
    EXPECT_EQ(co_model_importance_chart(model, &csv.p, &svg.p), CO_ERR_INPUT);
    EXPECT_NE(std::string(co_last_error()).find("importance requires a forest model"), std::string::npos);
    co_model_free(model);
}

TEST_F(CApi, SelectModel)
{
    std::vector<std::string> reports;
    for (const char* type : {"lr", "hgb"}) {
        co_model* model = fit(type);
        Owned r;
        ASSERT_EQ(co_model_evaluate(model, val, nullptr, "validation", 0, 0.0, &r.p), CO_OK);
        reports.push_back(r.str());
        co_model_free(model);
    }
    const char* ptrs[] = {reports[0].c_str(), reports[1].c_str()};
    Owned summary;
    ASSERT_EQ(co_select_model(ptrs, 2, &summary.p), CO_OK);
    const auto doc = nlohmann::json::parse(summary.str());
    EXPECT_TRUE(doc["selected"] == "features-lr" || doc["selected"] == "features-hgb");
    EXPECT_EQ(doc["ranking"].size(), 2u);
    Owned none;
    EXPECT_EQ(co_select_model(ptrs, 0, &none.p), CO_ERR_INPUT);
}
