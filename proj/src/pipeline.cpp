#include "codeorigin/pipeline.hpp"

#include "codeorigin/error.hpp"
#include "codeorigin/stylometry.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_map>

namespace codeorigin::pipeline {

using learners::ModelType;
using representation::RepresentationKind;

namespace {

double parse_number(const std::string& key, const std::string& value)
{
    double out = 0.0;
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end)
        fail_input("option '" + key + "' expects a number, got '" + value + "'");
    return out;
}

std::size_t parse_count(const std::string& key, const std::string& value)
{
    std::size_t out = 0;
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end)
        fail_input("option '" + key + "' expects a non-negative integer, got '" + value + "'");
    return out;
}

bool parse_flag(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    fail_input("option '" + key + "' expects true or false, got '" + value + "'");
}

void require_both_classes(const std::vector<int>& labels, const char* which)
{
    const auto pos = std::count(labels.begin(), labels.end(), 1);
    if (pos == 0 || static_cast<std::size_t>(pos) == labels.size())
        fail_input(std::string(which) + " set needs both human and machine samples");
}

learners::LogisticConfig logistic_config(const TrainOptions& o, std::map<std::string, double>& record)
{
    learners::LogisticConfig c;
    c.seed = o.seed;
    for (const auto& [key, value] : o.overrides) {
        if (key == "learning_rate") c.learning_rate = parse_number(key, value);
        else if (key == "epochs") c.epochs = parse_count(key, value);
        else if (key == "l2_penalty") c.l2_penalty = parse_number(key, value);
    }
    record = {{"learning_rate", c.learning_rate},
              {"epochs", static_cast<double>(c.epochs)},
              {"l2_penalty", c.l2_penalty}};
    return c;
}

learners::ForestConfig forest_config(const TrainOptions& o, std::map<std::string, double>& record)
{
    auto c = learners::default_forest_config(o.model == ModelType::extra_trees ? learners::ForestVariant::extra_trees
                                                                               : learners::ForestVariant::random_forest);
    c.seed = o.seed;
    for (const auto& [key, value] : o.overrides) {
        if (key == "n_trees") c.n_trees = parse_count(key, value);
        else if (key == "bootstrap") c.bootstrap = parse_flag(key, value);
        else if (key == "max_depth") c.max_depth = parse_count(key, value);
        else if (key == "min_samples_leaf") c.min_samples_leaf = parse_count(key, value);
        else if (key == "feature_subsample") c.feature_subsample = parse_count(key, value);
    }
    record = {{"n_trees", static_cast<double>(c.n_trees)},
              {"bootstrap", c.bootstrap ? 1.0 : 0.0},
              {"max_depth", static_cast<double>(c.max_depth)},
              {"min_samples_leaf", static_cast<double>(c.min_samples_leaf)},
              {"feature_subsample", static_cast<double>(c.feature_subsample)}};
    return c;
}

learners::BoostingConfig boosting_config(const TrainOptions& o, std::map<std::string, double>& record)
{
    learners::BoostingConfig c;
    c.seed = o.seed;
    for (const auto& [key, value] : o.overrides) {
        if (key == "n_stages") c.n_stages = parse_count(key, value);
        else if (key == "learning_rate") c.learning_rate = parse_number(key, value);
        else if (key == "max_bins") c.max_bins = parse_count(key, value);
        else if (key == "max_depth") c.max_depth = parse_count(key, value);
        else if (key == "min_samples_leaf") c.min_samples_leaf = parse_count(key, value);
        else if (key == "l2_regularization") c.l2_regularization = parse_number(key, value);
    }
    if (c.max_bins < 2 || c.max_bins > 256)
        fail_input("max_bins must lie in [2, 256]");
    record = {{"n_stages", static_cast<double>(c.n_stages)},
              {"learning_rate", c.learning_rate},
              {"max_bins", static_cast<double>(c.max_bins)},
              {"max_depth", static_cast<double>(c.max_depth)},
              {"min_samples_leaf", static_cast<double>(c.min_samples_leaf)},
              {"l2_regularization", c.l2_regularization}};
    return c;
}

} // namespace

Inputs build_inputs(const corpus::Dataset& data, RepresentationKind kind,
                    const representation::LoadedEmbeddings* embeddings)
{
    Inputs inputs;
    if (kind == RepresentationKind::handcrafted_features) {
        auto fm = stylometry::featurize_corpus(data);
        inputs.X = std::move(fm.features);
        inputs.labels = std::move(fm.labels);
        inputs.schema_version = std::string(stylometry::kSchemaVersion);
        return inputs;
    }

    if (!embeddings)
        fail_input("the embeddings representation needs an embeddings file");
    std::unordered_map<std::string_view, const representation::EmbeddingVector*> by_id;
    for (const auto& v : embeddings->vectors)
        by_id.emplace(v.id, &v);

    std::vector<std::string> missing;
    for (const auto& s : data)
        if (!by_id.count(s.id))
            missing.push_back(s.id);
    if (!missing.empty()) {
        std::string list;
        for (std::size_t i = 0; i < missing.size() && i < 20; ++i)
            list += (i ? ", " : "") + missing[i];
        if (missing.size() > 20)
            list += ", ... (" + std::to_string(missing.size()) + " in total)";
        fail_input("embeddings file has no vector for ids: " + list);
    }

    inputs.X = Matrix(data.size(), embeddings->dim);
    inputs.labels.resize(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& values = by_id.at(data[i].id)->values;
        std::copy(values.begin(), values.end(), inputs.X.row(i).begin());
        inputs.labels[i] = static_cast<int>(data[i].label);
    }
    inputs.schema_version = learners::embedding_schema_version(embeddings->dim);
    return inputs;
}

std::vector<std::string> hyperparameter_names(ModelType type)
{
    switch (type) {
    case ModelType::logistic: return {"learning_rate", "epochs", "l2_penalty"};
    case ModelType::random_forest:
    case ModelType::extra_trees: return {"n_trees", "bootstrap", "max_depth", "min_samples_leaf", "feature_subsample"};
    case ModelType::hist_boosting:
        return {"n_stages", "learning_rate", "max_bins", "max_depth", "min_samples_leaf", "l2_regularization"};
    }
    return {};
}

void set_option(TrainOptions& options, const std::string& key, const std::string& value)
{
    if (key == "representation")
        options.representation = representation::parse_representation(value);
    else if (key == "model")
        options.model = learners::parse_model_type(value);
    else if (key == "seed")
        options.seed = parse_count(key, value);
    else
        options.overrides[key] = value;
}

TrainResult train(const corpus::Dataset& train_set, const corpus::Dataset& validation_set, const TrainOptions& options,
                  const representation::LoadedEmbeddings* embeddings)
{
    const auto allowed = hyperparameter_names(options.model);
    for (const auto& [key, value] : options.overrides)
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            fail_input("hyperparameter '" + key + "' does not apply to model '" + learners::to_string(options.model) +
                       "'");

    const Inputs tr = build_inputs(train_set, options.representation, embeddings);
    const Inputs va = build_inputs(validation_set, options.representation, embeddings);
    require_both_classes(tr.labels, "training");
    require_both_classes(va.labels, "validation");

    learners::TrainedModel model;
    model.representation = options.representation;
    model.type = options.model;
    model.feature_schema_version = tr.schema_version;
    model.n_features = tr.X.cols();
    model.seed = options.seed;

    switch (options.model) {
    case ModelType::logistic: {
        const auto config = logistic_config(options, model.hyperparameters);
        model.scaler = learners::fit_scaler(tr.X);
        const Matrix scaled = learners::apply_scaler(*model.scaler, tr.X);
        model.classifier = learners::fit_logistic(scaled, tr.labels, config).model;
        break;
    }
    case ModelType::random_forest:
    case ModelType::extra_trees:
        model.classifier = learners::fit_forest(tr.X, tr.labels, forest_config(options, model.hyperparameters));
        break;
    case ModelType::hist_boosting:
        model.classifier = learners::fit_boosted(tr.X, tr.labels, boosting_config(options, model.hyperparameters)).model;
        break;
    }

    const auto scores = learners::predict_proba(model, va.X, va.schema_version);
    const evaluation::ScoredSet scored{scores, va.labels};
    model.threshold = evaluation::calibrate_threshold(scored);

    TrainResult result{std::move(model), {}};
    result.validation = evaluation::make_report(scored, result.model.threshold, learners::model_id(result.model),
                                                "validation");
    return result;
}

std::vector<double> score(const learners::TrainedModel& model, const corpus::Dataset& data,
                          const representation::LoadedEmbeddings* embeddings)
{
    const Inputs in = build_inputs(data, model.representation, embeddings);
    return learners::predict_proba(model, in.X, in.schema_version);
}

evaluation::EvalReport evaluate(const learners::TrainedModel& model, const corpus::Dataset& data,
                                const std::string& dataset_name, const representation::LoadedEmbeddings* embeddings,
                                std::optional<double> threshold)
{
    const Inputs in = build_inputs(data, model.representation, embeddings);
    const auto scores = learners::predict_proba(model, in.X, in.schema_version);
    const double tau = threshold.value_or(model.threshold);
    if (!(tau >= 0.0 && tau <= 1.0))
        fail_input("threshold must lie in [0, 1]");
    return evaluation::make_report({scores, in.labels}, tau, learners::model_id(model), dataset_name);
}

std::vector<std::string> input_names(const learners::TrainedModel& model)
{
    std::vector<std::string> names;
    if (model.representation == RepresentationKind::handcrafted_features) {
        for (const auto& info : stylometry::feature_schema())
            names.emplace_back(info.name);
    } else {
        for (std::size_t i = 0; i < model.n_features; ++i)
            names.push_back("dim_" + std::to_string(i));
    }
    return names;
}

} // namespace codeorigin::pipeline
