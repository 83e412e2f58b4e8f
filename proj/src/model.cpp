#include "codeorigin/model.hpp"

#include "codeorigin/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include <json.hpp>

namespace codeorigin::learners {

using nlohmann::json;

namespace {

json tree_to_json(const Tree& tree, std::size_t index)
{
    const auto& node = tree.nodes[index];
    json out;
    out["samples"] = node.sample_count;
    out["impurity"] = node.impurity;
    if (node.is_leaf()) {
        out["value"] = node.value;
        return out;
    }
    out["feature"] = node.feature;
    out["threshold"] = node.threshold;
    out["left"] = tree_to_json(tree, static_cast<std::size_t>(node.left));
    out["right"] = tree_to_json(tree, static_cast<std::size_t>(node.right));
    return out;
}

int tree_from_json(const json& in, Tree& tree, std::size_t n_features, std::size_t depth)
{
    if (depth > 512)
        fail_input("model file tree is nested too deeply");
    const auto index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    TreeNode node;
    node.sample_count = in.at("samples").get<std::size_t>();
    node.impurity = in.at("impurity").get<double>();
    if (in.contains("feature")) {
        node.feature = in.at("feature").get<int>();
        if (node.feature < 0 || static_cast<std::size_t>(node.feature) >= n_features)
            fail_input("model file tree splits on feature " + std::to_string(node.feature) +
                       " outside [0, " + std::to_string(n_features) + ")");
        node.threshold = in.at("threshold").get<double>();
        node.left = tree_from_json(in.at("left"), tree, n_features, depth + 1);
        node.right = tree_from_json(in.at("right"), tree, n_features, depth + 1);
    } else {
        node.value = in.at("value").get<double>();
    }
    tree.nodes[static_cast<std::size_t>(index)] = node;
    return index;
}

json trees_to_json(const std::vector<Tree>& trees)
{
    json out = json::array();
    for (const auto& tree : trees)
        out.push_back(tree_to_json(tree, 0));
    return out;
}

std::vector<Tree> trees_from_json(const json& in, std::size_t n_features)
{
    std::vector<Tree> trees;
    for (const auto& root : in) {
        Tree tree;
        tree_from_json(root, tree, n_features, 0);
        trees.push_back(std::move(tree));
    }
    return trees;
}

void require_finite(double value, const char* what)
{
    if (!std::isfinite(value))
        fail_input(std::string("cannot save a model with a non-finite ") + what);
}

json payload_to_json(const TrainedModel& model)
{
    json payload;
    if (const auto* linear = std::get_if<LinearModel>(&model.classifier)) {
        for (double w : linear->weights)
            require_finite(w, "weight");
        require_finite(linear->bias, "bias");
        payload["weights"] = linear->weights;
        payload["bias"] = linear->bias;
    } else if (const auto* forest = std::get_if<ForestModel>(&model.classifier)) {
        payload["variant"] = to_string(forest->variant);
        payload["feature_subsample"] = forest->feature_subsample;
        payload["seed"] = forest->seed;
        payload["trees"] = trees_to_json(forest->trees);
    } else {
        const auto& boosted = std::get<BoostedModel>(model.classifier);
        payload["learning_rate"] = boosted.learning_rate;
        payload["initial_log_odds"] = boosted.initial_log_odds;
        payload["bin_edges"] = boosted.bin_edges;
        payload["stages"] = trees_to_json(boosted.stages);
    }
    return payload;
}

} // namespace

const char* to_string(ModelType type)
{
    switch (type) {
    case ModelType::logistic: return "lr";
    case ModelType::random_forest: return "rf";
    case ModelType::extra_trees: return "et";
    case ModelType::hist_boosting: return "hgb";
    }
    return "lr";
}

ModelType parse_model_type(std::string_view text)
{
    if (text == "lr") return ModelType::logistic;
    if (text == "rf") return ModelType::random_forest;
    if (text == "et") return ModelType::extra_trees;
    if (text == "hgb") return ModelType::hist_boosting;
    fail_input("unknown model type '" + std::string(text) + "' (expected lr, rf, et or hgb)");
}

std::string model_id(const TrainedModel& model)
{
    return std::string(representation::to_string(model.representation)) + "-" + to_string(model.type);
}

std::string embedding_schema_version(std::size_t dim)
{
    return "embeddings-" + std::to_string(dim);
}

std::vector<double> predict_proba(const TrainedModel& model, const Matrix& X, std::string_view schema_version)
{
    if (schema_version != model.feature_schema_version)
        fail_input("feature schema mismatch: model was trained on '" + model.feature_schema_version +
                   "' but input uses '" + std::string(schema_version) + "'");
    if (X.cols() != model.n_features)
        fail_input("model expects " + std::to_string(model.n_features) + " input columns, got " +
                   std::to_string(X.cols()));

    const Matrix scaled = model.scaler ? apply_scaler(*model.scaler, X) : Matrix();
    const Matrix& input = model.scaler ? scaled : X;

    std::vector<double> out(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const auto row = input.row(i);
        double p = std::visit(
            [&](const auto& classifier) -> double {
                using T = std::decay_t<decltype(classifier)>;
                if constexpr (std::is_same_v<T, LinearModel>)
                    return predict_probability(classifier, row);
                else
                    return predict(classifier, row);
            },
            model.classifier);
        out[i] = std::clamp(p, 0.0, 1.0);
    }
    return out;
}

std::string serialize_model(const TrainedModel& model)
{
    require_finite(model.threshold, "threshold");
    json doc;
    doc["format"] = kModelFormat;
    doc["representation"] = representation::to_string(model.representation);
    doc["model_type"] = to_string(model.type);
    doc["feature_schema_version"] = model.feature_schema_version;
    doc["n_features"] = model.n_features;
    doc["threshold"] = model.threshold;
    if (model.scaler) {
        doc["scaler"] = {{"mean", model.scaler->mean}, {"std", model.scaler->stddev}};
    } else {
        doc["scaler"] = nullptr;
    }
    json hyper = json::object();
    for (const auto& [key, value] : model.hyperparameters)
        hyper[key] = value;
    doc["training"] = {{"seed", model.seed}, {"hyperparameters", hyper}};
    doc["payload"] = payload_to_json(model);
    return doc.dump() + "\n";
}

TrainedModel deserialize_model(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail_input(std::string("corrupted model file: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("format") || !doc["format"].is_string())
        fail_input("not a model file: missing 'format'");
    const auto format = doc["format"].get<std::string>();
    if (format != kModelFormat)
        fail_input("unsupported model format '" + format + "' (this build reads " + std::string(kModelFormat) + ")");

    try {
        TrainedModel model;
        model.representation = representation::parse_representation(doc.at("representation").get<std::string>());
        model.type = parse_model_type(doc.at("model_type").get<std::string>());
        model.feature_schema_version = doc.at("feature_schema_version").get<std::string>();
        model.n_features = doc.at("n_features").get<std::size_t>();
        model.threshold = doc.at("threshold").get<double>();
        if (!(model.threshold >= 0.0 && model.threshold <= 1.0))
            fail_input("model threshold lies outside [0, 1]");
        if (!doc.at("scaler").is_null()) {
            Scaler scaler;
            scaler.mean = doc["scaler"].at("mean").get<std::vector<double>>();
            scaler.stddev = doc["scaler"].at("std").get<std::vector<double>>();
            if (scaler.mean.size() != model.n_features || scaler.stddev.size() != model.n_features)
                fail_input("scaler width does not match n_features");
            model.scaler = std::move(scaler);
        }
        const auto& training = doc.at("training");
        model.seed = training.at("seed").get<std::uint64_t>();
        for (const auto& [key, value] : training.at("hyperparameters").items())
            model.hyperparameters[key] = value.get<double>();

        const auto& payload = doc.at("payload");
        switch (model.type) {
        case ModelType::logistic: {
            LinearModel linear;
            linear.weights = payload.at("weights").get<std::vector<double>>();
            linear.bias = payload.at("bias").get<double>();
            if (linear.weights.size() != model.n_features)
                fail_input("weight count does not match n_features");
            model.classifier = std::move(linear);
            break;
        }
        case ModelType::random_forest:
        case ModelType::extra_trees: {
            ForestModel forest;
            forest.variant = parse_forest_variant(payload.at("variant").get<std::string>());
            forest.feature_subsample = payload.at("feature_subsample").get<std::size_t>();
            forest.seed = payload.at("seed").get<std::uint64_t>();
            forest.n_features = model.n_features;
            forest.trees = trees_from_json(payload.at("trees"), model.n_features);
            if (forest.trees.empty())
                fail_input("forest payload has no trees");
            model.classifier = std::move(forest);
            break;
        }
        case ModelType::hist_boosting: {
            BoostedModel boosted;
            boosted.learning_rate = payload.at("learning_rate").get<double>();
            boosted.initial_log_odds = payload.at("initial_log_odds").get<double>();
            boosted.bin_edges = payload.at("bin_edges").get<std::vector<std::vector<double>>>();
            boosted.n_features = model.n_features;
            boosted.stages = trees_from_json(payload.at("stages"), model.n_features);
            model.classifier = std::move(boosted);
            break;
        }
        }
        return model;
    } catch (const json::exception& e) {
        fail_input(std::string("corrupted model file: ") + e.what());
    }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path)
{
    const std::string text = serialize_model(model);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        fail_input("cannot write model file " + path.string());
    out << text;
}

TrainedModel load_model(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail_input("cannot open model file " + path.string());
    return deserialize_model(std::string(std::istreambuf_iterator<char>(in), {}));
}

} // namespace codeorigin::learners
