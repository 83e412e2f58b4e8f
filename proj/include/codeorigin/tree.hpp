#pragma once

#include "codeorigin/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace codeorigin::learners {

/// One node of a binary decision tree, stored in a flat preorder array.
/// Internal nodes send x[feature] <= threshold to `left`.
struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;          // leaf output: positive fraction, or a boosting step
    std::size_t sample_count = 0;
    double impurity = 0.0;       // Gini of the node's training subset

    bool is_leaf() const noexcept { return feature < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes; // nodes[0] is the root

    const TreeNode& leaf_for(std::span<const double> x) const;
    double predict(std::span<const double> x) const { return leaf_for(x).value; }
    std::size_t internal_count() const;
};

enum class SplitMode {
    best,   // exhaustive midpoints, maximal Gini decrease
    random, // one uniform threshold per candidate feature (ExtraTrees)
};

struct TreeConfig {
    std::size_t max_depth = 24;
    std::size_t min_samples_leaf = 1;
    std::size_t feature_subsample = 0; // candidate features per node; 0 means all
    SplitMode split_mode = SplitMode::best;
    std::uint64_t seed = 0;
};

/// 1 - p^2 - (1-p)^2 for `positives` out of `total`; 0 for an empty node.
double gini(double positives, double total);

/// CART classification tree on every row of X.
Tree fit_tree(const Matrix& X, std::span<const int> y, const TreeConfig& config = {});

/// Same, on the given row indices. Repeated indices count with multiplicity
/// (bootstrap samples).
Tree fit_tree(const Matrix& X, std::span<const int> y, std::vector<std::size_t> rows, const TreeConfig& config);

/// Sample-weighted Gini decrease of each internal node, summed per feature.
std::vector<double> impurity_decrease_by_feature(const Tree& tree, std::size_t n_features);

} // namespace codeorigin::learners
