#include "codeorigin/forest.hpp"

#include "codeorigin/error.hpp"
#include "codeorigin/parallel.hpp"
#include "codeorigin/random.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace codeorigin::learners {

const char* to_string(ForestVariant variant)
{
    return variant == ForestVariant::extra_trees ? "extra_trees" : "random_forest";
}

ForestVariant parse_forest_variant(std::string_view text)
{
    if (text == "random_forest")
        return ForestVariant::random_forest;
    if (text == "extra_trees")
        return ForestVariant::extra_trees;
    fail_input("unknown forest variant '" + std::string(text) + "'");
}

ForestConfig default_forest_config(ForestVariant variant)
{
    ForestConfig config;
    config.variant = variant;
    config.bootstrap = variant == ForestVariant::random_forest;
    return config;
}

ForestModel fit_forest(const Matrix& X, std::span<const int> y, const ForestConfig& config)
{
    if (config.n_trees < 1)
        fail_input("a forest needs at least one tree");
    if (X.rows() != y.size())
        fail_input("feature matrix has " + std::to_string(X.rows()) + " rows but " + std::to_string(y.size()) +
                   " labels were given");
    const auto positives = std::count_if(y.begin(), y.end(), [](int v) { return v != 0; });
    if (positives == 0 || static_cast<std::size_t>(positives) == y.size())
        fail_input("forest training needs both classes present");

    ForestModel forest;
    forest.variant = config.variant;
    forest.seed = config.seed;
    forest.n_features = X.cols();
    forest.feature_subsample = config.feature_subsample != 0
                                   ? std::min(config.feature_subsample, X.cols())
                                   : std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(X.cols()))));
    forest.trees.resize(config.n_trees);

    parallel_for(config.n_trees, [&](std::size_t t) {
        const std::uint64_t tree_seed = derive_seed(config.seed, t);
        TreeConfig tree_config;
        tree_config.max_depth = config.max_depth;
        tree_config.min_samples_leaf = config.min_samples_leaf;
        tree_config.feature_subsample = forest.feature_subsample;
        tree_config.split_mode =
            config.variant == ForestVariant::extra_trees ? SplitMode::random : SplitMode::best;
        tree_config.seed = tree_seed;

        std::vector<std::size_t> rows(X.rows());
        if (config.bootstrap) {
            Rng rng(derive_seed(tree_seed, 0xB007));
            for (auto& r : rows)
                r = static_cast<std::size_t>(rng.below(X.rows()));
        } else {
            std::iota(rows.begin(), rows.end(), 0);
        }
        forest.trees[t] = fit_tree(X, y, std::move(rows), tree_config);
    });
    return forest;
}

double predict(const ForestModel& forest, std::span<const double> x)
{
    double sum = 0.0;
    for (const auto& tree : forest.trees)
        sum += tree.predict(x);
    return sum / static_cast<double>(forest.trees.size());
}

std::vector<double> feature_importance(const ForestModel& forest)
{
    std::vector<double> importance(forest.n_features, 0.0);
    std::size_t contributing = 0;
    for (const auto& tree : forest.trees) {
        const auto decrease = impurity_decrease_by_feature(tree, forest.n_features);
        const double total = std::accumulate(decrease.begin(), decrease.end(), 0.0);
        if (!(total > 0.0))
            continue;
        ++contributing;
        for (std::size_t j = 0; j < importance.size(); ++j)
            importance[j] += decrease[j] / total;
    }
    if (contributing == 0)
        fail_input("feature importance needs at least one split; every tree in the forest is a single leaf");
    const double sum = std::accumulate(importance.begin(), importance.end(), 0.0);
    for (auto& value : importance)
        value /= sum;
    return importance;
}

} // namespace codeorigin::learners
