#pragma once

#include "codeorigin/boosting.hpp"
#include "codeorigin/forest.hpp"
#include "codeorigin/logistic.hpp"
#include "codeorigin/matrix.hpp"
#include "codeorigin/representation.hpp"
#include "codeorigin/scaler.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace codeorigin::learners {

enum class ModelType { logistic, random_forest, extra_trees, hist_boosting };

/// "lr", "rf", "et", "hgb"
const char* to_string(ModelType type);
ModelType parse_model_type(std::string_view text);

inline constexpr std::string_view kModelFormat = "mgcd-model/v1";

/// A fitted classifier together with everything needed to score new input:
/// the representation it consumes, the scaler (logistic regression only),
/// the calibrated decision threshold and the feature schema it was fitted on.
struct TrainedModel {
    representation::RepresentationKind representation = representation::RepresentationKind::handcrafted_features;
    ModelType type = ModelType::logistic;
    std::optional<Scaler> scaler;
    std::variant<LinearModel, ForestModel, BoostedModel> classifier;
    double threshold = 0.5;
    std::string feature_schema_version;
    std::size_t n_features = 0;
    std::uint64_t seed = 0;
    std::map<std::string, double> hyperparameters;
};

/// "<representation>-<type>", e.g. "features-rf".
std::string model_id(const TrainedModel& model);

/// Schema version string used for embedding inputs of the given width.
std::string embedding_schema_version(std::size_t dim);

/// Probabilities for every row of X. Throws when `schema_version` differs
/// from the model's or the column count is wrong.
std::vector<double> predict_proba(const TrainedModel& model, const Matrix& X, std::string_view schema_version);

std::string serialize_model(const TrainedModel& model);
TrainedModel deserialize_model(const std::string& text);

void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

} // namespace codeorigin::learners
