#include "codeorigin/codeorigin.h"

#include "codeorigin/corpus.hpp"
#include "codeorigin/error.hpp"
#include "codeorigin/model.hpp"
#include "codeorigin/pipeline.hpp"
#include "codeorigin/report.hpp"
#include "codeorigin/representation.hpp"
#include "codeorigin/stylometry.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

namespace cc = codeorigin;

struct co_dataset {
    cc::corpus::Dataset data;
};

struct co_embeddings {
    cc::representation::LoadedEmbeddings loaded;
};

struct co_train_options {
    cc::pipeline::TrainOptions options;
};

struct co_model {
    cc::learners::TrainedModel model;
    std::string id;
};

namespace {

thread_local std::string last_error;

template <class F>
co_status guarded(F&& body)
{
    try {
        body();
        last_error.clear();
        return CO_OK;
    } catch (const cc::Error& e) {
        last_error = e.what();
        return e.kind() == cc::ErrorKind::training ? CO_ERR_TRAINING : CO_ERR_INPUT;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return CO_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return CO_ERR_INTERNAL;
    }
}

char* duplicate(const std::string& text)
{
    auto* out = static_cast<char*>(std::malloc(text.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

void require(const void* pointer, const char* what)
{
    if (!pointer)
        cc::fail_input(std::string(what) + " must not be NULL");
}

const cc::representation::LoadedEmbeddings* embeddings_of(const co_embeddings* e)
{
    return e ? &e->loaded : nullptr;
}

std::optional<double> threshold_of(int has_threshold, double threshold)
{
    if (!has_threshold)
        return std::nullopt;
    if (!(threshold >= 0.0 && threshold <= 1.0))
        cc::fail_input("threshold must lie in [0, 1]");
    return threshold;
}

const cc::learners::ForestModel& forest_of(const co_model* model)
{
    const auto* forest = std::get_if<cc::learners::ForestModel>(&model->model.classifier);
    if (!forest)
        cc::fail_input("importance requires a forest model");
    return *forest;
}

} // namespace

extern "C" {

const char* co_version(void) { return "1.0.0"; }

const char* co_last_error(void) { return last_error.c_str(); }

void co_string_free(char* text) { std::free(text); }

co_status co_dataset_load(const char* path, int require_label, co_dataset** out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        cc::corpus::LoadOptions options;
        options.require_label = require_label != 0;
        *out = new co_dataset{cc::corpus::load_jsonl(path, options)};
    });
}

void co_dataset_free(co_dataset* dataset) { delete dataset; }

size_t co_dataset_size(const co_dataset* dataset) { return dataset ? dataset->data.size() : 0; }

const char* co_dataset_id(const co_dataset* dataset, size_t index)
{
    if (!dataset || index >= dataset->data.size())
        return nullptr;
    return dataset->data[index].id.c_str();
}

void co_dataset_class_balance(const co_dataset* dataset, size_t* human, size_t* machine)
{
    const auto balance = dataset ? cc::corpus::class_balance(dataset->data) : cc::corpus::ClassBalance{};
    if (human)
        *human = balance.human;
    if (machine)
        *machine = balance.machine;
}

co_status co_split_manifest(const co_dataset* dataset, double val_ratio, uint64_t seed, char** manifest_json)
{
    return guarded([&] {
        require(dataset, "dataset");
        require(manifest_json, "manifest_json");
        const auto split = cc::corpus::stratified_split(dataset->data, val_ratio, seed);
        *manifest_json = duplicate(cc::corpus::manifest_json(dataset->data, split));
    });
}

co_status co_dataset_from_manifest(const co_dataset* dataset, const char* manifest_json, int which, co_dataset** out)
{
    return guarded([&] {
        require(dataset, "dataset");
        require(manifest_json, "manifest_json");
        require(out, "out");
        if (which != 0 && which != 1)
            cc::fail_input("manifest part must be 0 (train) or 1 (validation)");
        const auto split = cc::corpus::split_from_manifest(dataset->data, manifest_json);
        *out = new co_dataset{cc::corpus::select(dataset->data, which == 0 ? split.train : split.validation)};
    });
}

size_t co_feature_count(void) { return cc::stylometry::kFeatureCount; }

const char* co_feature_name(size_t index)
{
    if (index >= cc::stylometry::kFeatureCount)
        return nullptr;
    return cc::stylometry::feature_schema()[index].name.data();
}

const char* co_feature_schema_version(void) { return cc::stylometry::kSchemaVersion.data(); }

co_status co_feature_schema_json(char** json)
{
    return guarded([&] {
        require(json, "json");
        *json = duplicate(cc::stylometry::feature_schema_json());
    });
}

co_status co_extract_features(const char* code, size_t length, const char* language, double* out, size_t out_length)
{
    return guarded([&] {
        require(out, "out");
        if (length > 0)
            require(code, "code");
        if (out_length < cc::stylometry::kFeatureCount)
            cc::fail_input("output buffer holds fewer than " + std::to_string(cc::stylometry::kFeatureCount) +
                           " values");
        std::optional<std::string> lang;
        if (language)
            lang = language;
        const auto fv = cc::stylometry::extract_features(std::string_view(code ? code : "", length), lang);
        std::copy(fv.values.begin(), fv.values.end(), out);
    });
}

co_status co_featurize_csv(const co_dataset* dataset, char** csv)
{
    return guarded([&] {
        require(dataset, "dataset");
        require(csv, "csv");
        *csv = duplicate(cc::stylometry::feature_csv(cc::stylometry::featurize_corpus(dataset->data)));
    });
}

co_status co_embeddings_load(const char* path, co_embeddings** out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new co_embeddings{cc::representation::load_embeddings(path)};
    });
}

void co_embeddings_free(co_embeddings* embeddings) { delete embeddings; }

size_t co_embeddings_count(const co_embeddings* e) { return e ? e->loaded.vectors.size() : 0; }

size_t co_embeddings_dim(const co_embeddings* e) { return e ? e->loaded.dim : 0; }

size_t co_embeddings_renormalized(const co_embeddings* e) { return e ? e->loaded.renormalized : 0; }

co_train_options* co_train_options_new(void) { return new (std::nothrow) co_train_options{}; }

void co_train_options_free(co_train_options* options) { delete options; }

co_status co_train_options_set(co_train_options* options, const char* key, const char* value)
{
    return guarded([&] {
        require(options, "options");
        require(key, "key");
        require(value, "value");
        cc::pipeline::set_option(options->options, key, value);
    });
}

co_status co_model_train(const co_dataset* train, const co_dataset* validation, const co_embeddings* embeddings,
                         const co_train_options* options, co_model** out, char** validation_report_json)
{
    return guarded([&] {
        require(train, "train");
        require(validation, "validation");
        require(out, "out");
        const cc::pipeline::TrainOptions defaults;
        auto result = cc::pipeline::train(train->data, validation->data, options ? options->options : defaults,
                                          embeddings_of(embeddings));
        char* report = validation_report_json ? duplicate(cc::evaluation::report_json(result.validation)) : nullptr;
        auto id = cc::learners::model_id(result.model);
        *out = new co_model{std::move(result.model), std::move(id)};
        if (validation_report_json)
            *validation_report_json = report;
    });
}

co_status co_model_save(const co_model* model, const char* path)
{
    return guarded([&] {
        require(model, "model");
        require(path, "path");
        cc::learners::save_model(model->model, path);
    });
}

co_status co_model_load(const char* path, co_model** out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        auto model = cc::learners::load_model(path);
        auto id = cc::learners::model_id(model);
        *out = new co_model{std::move(model), std::move(id)};
    });
}

void co_model_free(co_model* model) { delete model; }

const char* co_model_id(const co_model* model) { return model ? model->id.c_str() : nullptr; }

double co_model_threshold(const co_model* model) { return model ? model->model.threshold : std::nan(""); }

const char* co_model_representation(const co_model* model)
{
    return model ? cc::representation::to_string(model->model.representation) : nullptr;
}

co_status co_model_predict(const co_model* model, const co_dataset* dataset, const co_embeddings* embeddings,
                           int has_threshold, double threshold, double* probabilities, int* verdicts, size_t length)
{
    return guarded([&] {
        require(model, "model");
        require(dataset, "dataset");
        require(probabilities, "probabilities");
        if (length < dataset->data.size())
            cc::fail_input("output buffers are shorter than the dataset");
        const double tau = threshold_of(has_threshold, threshold).value_or(model->model.threshold);
        const auto scores = cc::pipeline::score(model->model, dataset->data, embeddings_of(embeddings));
        for (std::size_t i = 0; i < scores.size(); ++i) {
            probabilities[i] = scores[i];
            if (verdicts)
                verdicts[i] = scores[i] >= tau ? 1 : 0;
        }
    });
}

co_status co_model_evaluate(const co_model* model, const co_dataset* dataset, const co_embeddings* embeddings,
                            const char* dataset_name, int has_threshold, double threshold, char** report_json)
{
    return guarded([&] {
        require(model, "model");
        require(dataset, "dataset");
        require(report_json, "report_json");
        const auto report = cc::pipeline::evaluate(model->model, dataset->data, dataset_name ? dataset_name : "dataset",
                                                   embeddings_of(embeddings), threshold_of(has_threshold, threshold));
        *report_json = duplicate(cc::evaluation::report_json(report));
    });
}

co_status co_report_to_csv(const char* report_json, char** csv)
{
    return guarded([&] {
        require(report_json, "report_json");
        require(csv, "csv");
        const auto report = cc::evaluation::parse_report_json(report_json);
        *csv = duplicate(cc::evaluation::emit_report(report, cc::evaluation::ReportFormat::csv));
    });
}

co_status co_model_importance(const co_model* model, double* out, size_t length)
{
    return guarded([&] {
        require(model, "model");
        require(out, "out");
        const auto importance = cc::learners::feature_importance(forest_of(model));
        if (length < importance.size())
            cc::fail_input("output buffer is shorter than the model's input width");
        std::copy(importance.begin(), importance.end(), out);
    });
}

co_status co_model_importance_chart(const co_model* model, char** csv, char** svg)
{
    return guarded([&] {
        require(model, "model");
        const auto importance = cc::learners::feature_importance(forest_of(model));
        const auto names = cc::pipeline::input_names(model->model);
        const auto bars = cc::evaluation::importance_ranking(importance, names);
        char* csv_text = csv ? duplicate(cc::evaluation::importance_csv(bars)) : nullptr;
        char* svg_text = nullptr;
        try {
            if (svg)
                svg_text = duplicate(cc::evaluation::importance_svg(bars, "Feature importance (" + model->id + ")"));
        } catch (...) {
            std::free(csv_text);
            throw;
        }
        if (csv)
            *csv = csv_text;
        if (svg)
            *svg = svg_text;
    });
}

co_status co_select_model(const char* const* report_jsons, size_t count, char** summary_json)
{
    return guarded([&] {
        require(summary_json, "summary_json");
        if (count > 0)
            require(report_jsons, "report_jsons");
        std::vector<cc::evaluation::EvalReport> reports;
        for (size_t i = 0; i < count; ++i) {
            require(report_jsons[i], "report");
            reports.push_back(cc::evaluation::parse_report_json(report_jsons[i]));
        }
        const auto selected = cc::evaluation::select_model(reports);
        nlohmann::json ranking = nlohmann::json::array();
        for (const auto& r : cc::evaluation::rank_reports(reports))
            ranking.push_back({{"model", r.model}, {"dataset", r.dataset}, {"pr_auc", r.pr_auc}, {"roc_auc", r.roc_auc}});
        nlohmann::json summary;
        summary["selected"] = selected;
        summary["criterion"] = "pr_auc, then roc_auc, then model id";
        summary["ranking"] = std::move(ranking);
        *summary_json = duplicate(summary.dump(2) + "\n");
    });
}

} // extern "C"
