#pragma once

#include "codeorigin/corpus.hpp"
#include "codeorigin/model.hpp"
#include "codeorigin/report.hpp"
#include "codeorigin/representation.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace codeorigin::pipeline {

/// Design matrix for a dataset under one representation.
struct Inputs {
    Matrix X;
    std::vector<int> labels;
    std::string schema_version;
};

/// Stylometry features, or the embedding rows matched to snippet ids.
/// Embedding input fails when any snippet id has no vector, listing them.
Inputs build_inputs(const corpus::Dataset& data, representation::RepresentationKind kind,
                    const representation::LoadedEmbeddings* embeddings);

struct TrainOptions {
    representation::RepresentationKind representation = representation::RepresentationKind::handcrafted_features;
    learners::ModelType model = learners::ModelType::random_forest;
    std::uint64_t seed = 42;
    /// Hyperparameter overrides by name; validated against the model type.
    std::map<std::string, std::string> overrides;
};

/// Sets "representation", "model", "seed" or a hyperparameter override.
void set_option(TrainOptions& options, const std::string& key, const std::string& value);

/// Hyperparameter names accepted for a model type.
std::vector<std::string> hyperparameter_names(learners::ModelType type);

struct TrainResult {
    learners::TrainedModel model;
    evaluation::EvalReport validation;
};

/// Fits on `train`, calibrates the F1-optimal threshold on `validation`, and
/// reports validation metrics at that threshold.
TrainResult train(const corpus::Dataset& train, const corpus::Dataset& validation, const TrainOptions& options,
                  const representation::LoadedEmbeddings* embeddings = nullptr);

/// Scores for every snippet, in input order.
std::vector<double> score(const learners::TrainedModel& model, const corpus::Dataset& data,
                          const representation::LoadedEmbeddings* embeddings = nullptr);

/// Report at the model's stored threshold unless `threshold` overrides it.
evaluation::EvalReport evaluate(const learners::TrainedModel& model, const corpus::Dataset& data,
                                const std::string& dataset_name,
                                const representation::LoadedEmbeddings* embeddings = nullptr,
                                std::optional<double> threshold = std::nullopt);

/// Names for the model's input columns: stylometry names or dim_<i>.
std::vector<std::string> input_names(const learners::TrainedModel& model);

} // namespace codeorigin::pipeline
