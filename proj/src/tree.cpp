#include "codeorigin/tree.hpp"

#include "codeorigin/error.hpp"
#include "codeorigin/random.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace codeorigin::learners {

namespace {

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double score = -std::numeric_limits<double>::infinity();
};

// Sum over children of (pos^2 + neg^2) / n. Maximising this is the same as
// maximising the weighted Gini decrease, since the parent term is fixed.
double children_purity(double pos_l, double n_l, double pos_r, double n_r)
{
    const double neg_l = n_l - pos_l;
    const double neg_r = n_r - pos_r;
    return (pos_l * pos_l + neg_l * neg_l) / n_l + (pos_r * pos_r + neg_r * neg_r) / n_r;
}

class TreeBuilder {
public:
    TreeBuilder(const Matrix& X, std::span<const int> y, const TreeConfig& config)
        : X_(X), y_(y), config_(config), rng_(config.seed)
    {
        const std::size_t d = X.cols();
        subsample_ = config.feature_subsample == 0 ? d : std::min(config.feature_subsample, d);
        min_leaf_ = std::max<std::size_t>(1, config.min_samples_leaf);
    }

    Tree build(std::vector<std::size_t> rows)
    {
        grow(rows, 0);
        return std::move(tree_);
    }

private:
    int grow(std::vector<std::size_t>& rows, std::size_t depth)
    {
        const auto index = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();

        std::size_t positives = 0;
        for (auto r : rows)
            positives += y_[r] != 0 ? 1 : 0;
        const auto n = static_cast<double>(rows.size());
        {
            auto& node = tree_.nodes[static_cast<std::size_t>(index)];
            node.sample_count = rows.size();
            node.value = rows.empty() ? 0.0 : static_cast<double>(positives) / n;
            node.impurity = gini(static_cast<double>(positives), n);
        }

        const bool pure = positives == 0 || positives == rows.size();
        if (pure || depth >= config_.max_depth || rows.size() < 2 * min_leaf_)
            return index;

        const Split split = find_split(rows);
        if (split.feature < 0)
            return index;

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (auto r : rows)
            (X_(r, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right).push_back(r);
        rows.clear();
        rows.shrink_to_fit();

        const int left_index = grow(left, depth + 1);
        const int right_index = grow(right, depth + 1);
        auto& node = tree_.nodes[static_cast<std::size_t>(index)];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = left_index;
        node.right = right_index;
        return index;
    }

    // Visits features in a seeded random order and keeps the first
    // `subsample_` that are not constant on this node; constant features do
    // not use up the budget.
    std::vector<std::size_t> candidate_features(const std::vector<std::size_t>& rows)
    {
        std::vector<std::size_t> order(X_.cols());
        std::iota(order.begin(), order.end(), 0);
        if (subsample_ < order.size())
            rng_.shuffle(order);

        std::vector<std::size_t> chosen;
        for (auto f : order) {
            if (chosen.size() == subsample_)
                break;
            const double first = X_(rows.front(), f);
            const bool varies = std::any_of(rows.begin(), rows.end(), [&](auto r) { return X_(r, f) != first; });
            if (varies)
                chosen.push_back(f);
        }
        std::sort(chosen.begin(), chosen.end());
        return chosen;
    }

    Split find_split(const std::vector<std::size_t>& rows)
    {
        Split best;
        for (auto f : candidate_features(rows)) {
            if (config_.split_mode == SplitMode::best)
                best_threshold(rows, f, best);
            else
                random_threshold(rows, f, best);
        }
        return best;
    }

    void consider(Split& best, std::size_t feature, double threshold, double score) const
    {
        // Strict improvement keeps the lowest feature, then lowest threshold, on ties.
        if (score > best.score) {
            best.feature = static_cast<int>(feature);
            best.threshold = threshold;
            best.score = score;
        }
    }

    void best_threshold(const std::vector<std::size_t>& rows, std::size_t f, Split& best)
    {
        std::vector<std::pair<double, int>> column;
        column.reserve(rows.size());
        double total_pos = 0.0;
        for (auto r : rows) {
            column.emplace_back(X_(r, f), y_[r]);
            total_pos += y_[r] != 0 ? 1.0 : 0.0;
        }
        std::sort(column.begin(), column.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        const auto n = static_cast<double>(column.size());
        double pos_left = 0.0;
        for (std::size_t k = 1; k < column.size(); ++k) {
            pos_left += column[k - 1].second != 0 ? 1.0 : 0.0;
            if (column[k - 1].first == column[k].first)
                continue;
            if (k < min_leaf_ || column.size() - k < min_leaf_)
                continue;
            const double lo = column[k - 1].first;
            const double hi = column[k].first;
            double threshold = lo + (hi - lo) / 2.0;
            if (!(threshold < hi))
                threshold = lo;
            const auto n_left = static_cast<double>(k);
            consider(best, f, threshold, children_purity(pos_left, n_left, total_pos - pos_left, n - n_left));
        }
    }

    void random_threshold(const std::vector<std::size_t>& rows, std::size_t f, Split& best)
    {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (auto r : rows) {
            lo = std::min(lo, X_(r, f));
            hi = std::max(hi, X_(r, f));
        }
        double threshold = lo + rng_.uniform() * (hi - lo);
        if (!(threshold < hi))
            threshold = lo;

        double pos_left = 0.0, n_left = 0.0, pos_right = 0.0, n_right = 0.0;
        for (auto r : rows) {
            const double label = y_[r] != 0 ? 1.0 : 0.0;
            if (X_(r, f) <= threshold) {
                pos_left += label;
                n_left += 1.0;
            } else {
                pos_right += label;
                n_right += 1.0;
            }
        }
        const auto min_leaf = static_cast<double>(min_leaf_);
        if (n_left < min_leaf || n_right < min_leaf)
            return;
        consider(best, f, threshold, children_purity(pos_left, n_left, pos_right, n_right));
    }

    const Matrix& X_;
    std::span<const int> y_;
    TreeConfig config_;
    Rng rng_;
    std::size_t subsample_ = 0;
    std::size_t min_leaf_ = 1;
    Tree tree_;
};

} // namespace

double gini(double positives, double total)
{
    if (total <= 0.0)
        return 0.0;
    const double p = positives / total;
    return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

const TreeNode& Tree::leaf_for(std::span<const double> x) const
{
    std::size_t i = 0;
    while (!nodes[i].is_leaf())
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(nodes[i].feature)] <= nodes[i].threshold
                                         ? nodes[i].left
                                         : nodes[i].right);
    return nodes[i];
}

std::size_t Tree::internal_count() const
{
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return !n.is_leaf(); }));
}

Tree fit_tree(const Matrix& X, std::span<const int> y, const TreeConfig& config)
{
    std::vector<std::size_t> rows(X.rows());
    std::iota(rows.begin(), rows.end(), 0);
    return fit_tree(X, y, std::move(rows), config);
}

Tree fit_tree(const Matrix& X, std::span<const int> y, std::vector<std::size_t> rows, const TreeConfig& config)
{
    if (X.rows() != y.size())
        fail_input("feature matrix has " + std::to_string(X.rows()) + " rows but " + std::to_string(y.size()) +
                   " labels were given");
    if (rows.empty())
        fail_input("a decision tree needs at least one sample");
    return TreeBuilder(X, y, config).build(std::move(rows));
}

std::vector<double> impurity_decrease_by_feature(const Tree& tree, std::size_t n_features)
{
    std::vector<double> decrease(n_features, 0.0);
    for (const auto& node : tree.nodes) {
        if (node.is_leaf())
            continue;
        const auto& l = tree.nodes[static_cast<std::size_t>(node.left)];
        const auto& r = tree.nodes[static_cast<std::size_t>(node.right)];
        const double d = static_cast<double>(node.sample_count) * node.impurity -
                         static_cast<double>(l.sample_count) * l.impurity -
                         static_cast<double>(r.sample_count) * r.impurity;
        decrease.at(static_cast<std::size_t>(node.feature)) += std::max(0.0, d);
    }
    return decrease;
}

} // namespace codeorigin::learners
