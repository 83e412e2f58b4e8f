#pragma once

#include "codeorigin/tree.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace codeorigin::learners {

enum class ForestVariant {
    random_forest, // bootstrap rows, best splits
    extra_trees,   // all rows, random thresholds
};

const char* to_string(ForestVariant variant);
ForestVariant parse_forest_variant(std::string_view text);

struct ForestConfig {
    std::size_t n_trees = 200;
    bool bootstrap = true;
    ForestVariant variant = ForestVariant::random_forest;
    std::size_t max_depth = 24;
    std::size_t min_samples_leaf = 2;
    std::size_t feature_subsample = 0; // 0 means floor(sqrt(d))
    std::uint64_t seed = 42;
};

/// Defaults for a variant: bootstrap on for random_forest, off for extra_trees.
ForestConfig default_forest_config(ForestVariant variant);

struct ForestModel {
    std::vector<Tree> trees;
    ForestVariant variant = ForestVariant::random_forest;
    std::size_t feature_subsample = 0;
    std::uint64_t seed = 0;
    std::size_t n_features = 0;
};

/// Trees are grown in parallel; tree t is seeded with derive_seed(seed, t)
/// so the result does not depend on the thread count.
ForestModel fit_forest(const Matrix& X, std::span<const int> y, const ForestConfig& config);

/// Arithmetic mean of the trees' leaf positive fractions.
double predict(const ForestModel& forest, std::span<const double> x);

/// Mean decrease in impurity: each tree's per-feature Gini decrease is
/// normalised by that tree's total, averaged over trees that split at all,
/// then normalised to sum to 1. Throws when no tree has a split.
std::vector<double> feature_importance(const ForestModel& forest);

} // namespace codeorigin::learners
