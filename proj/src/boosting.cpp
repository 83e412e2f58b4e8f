#include "codeorigin/boosting.hpp"

#include "codeorigin/error.hpp"
#include "codeorigin/logistic.hpp"
#include "codeorigin/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace codeorigin::learners {

namespace {

constexpr double kMinChildHessian = 1e-3;

double softplus(double z)
{
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double mean_bce(std::span<const double> raw, std::span<const int> y)
{
    double loss = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i)
        loss += softplus(raw[i]) - (y[i] != 0 ? raw[i] : 0.0);
    return loss / static_cast<double>(raw.size());
}

struct BinnedData {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> bins; // row-major
    std::vector<std::size_t> bin_counts;

    std::uint8_t at(std::size_t r, std::size_t c) const { return bins[r * cols + c]; }
};

struct Histogram {
    std::vector<double> grad;
    std::vector<double> hess;
    std::vector<std::size_t> count;
};

class StageBuilder {
public:
    StageBuilder(const BinnedData& data, const std::vector<std::vector<double>>& edges,
                 std::span<const double> gradient, std::span<const double> hessian, const BoostingConfig& config)
        : data_(data), edges_(edges), g_(gradient), h_(hessian), config_(config)
    {
    }

    Tree build(std::vector<std::size_t> rows)
    {
        grow(rows, 0);
        return std::move(tree_);
    }

private:
    struct Split {
        int feature = -1;
        std::size_t bin = 0;
        double gain = 0.0;
    };

    double leaf_value(double G, double H) const { return -G / (H + config_.l2_regularization); }

    double score(double G, double H) const { return G * G / (H + config_.l2_regularization); }

    int grow(std::vector<std::size_t>& rows, std::size_t depth)
    {
        const auto index = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();

        double G = 0.0, H = 0.0;
        for (auto r : rows) {
            G += g_[r];
            H += h_[r];
        }
        {
            auto& node = tree_.nodes[static_cast<std::size_t>(index)];
            node.sample_count = rows.size();
            node.value = H + config_.l2_regularization > 0.0 ? leaf_value(G, H) : 0.0;
        }
        if (depth >= config_.max_depth || rows.size() < 2 * config_.min_samples_leaf)
            return index;

        const Split split = find_split(rows, G, H);
        if (split.feature < 0)
            return index;

        const auto f = static_cast<std::size_t>(split.feature);
        std::vector<std::size_t> left, right;
        for (auto r : rows)
            (data_.at(r, f) <= split.bin ? left : right).push_back(r);
        rows.clear();
        rows.shrink_to_fit();

        const int l = grow(left, depth + 1);
        const int r = grow(right, depth + 1);
        auto& node = tree_.nodes[static_cast<std::size_t>(index)];
        node.feature = split.feature;
        node.threshold = edges_[f][split.bin];
        node.left = l;
        node.right = r;
        return index;
    }

    Split find_split(const std::vector<std::size_t>& rows, double G, double H) const
    {
        Split best;
        const double parent = score(G, H);
        const std::size_t min_leaf = std::max<std::size_t>(1, config_.min_samples_leaf);
        for (std::size_t f = 0; f < data_.cols; ++f) {
            const std::size_t nb = data_.bin_counts[f];
            if (nb < 2)
                continue;
            Histogram hist{std::vector<double>(nb, 0.0), std::vector<double>(nb, 0.0),
                           std::vector<std::size_t>(nb, 0)};
            for (auto r : rows) {
                const auto b = data_.at(r, f);
                hist.grad[b] += g_[r];
                hist.hess[b] += h_[r];
                ++hist.count[b];
            }
            double GL = 0.0, HL = 0.0;
            std::size_t nl = 0;
            for (std::size_t b = 0; b + 1 < nb; ++b) {
                GL += hist.grad[b];
                HL += hist.hess[b];
                nl += hist.count[b];
                const std::size_t nr = rows.size() - nl;
                if (nl < min_leaf || nr < min_leaf)
                    continue;
                const double HR = H - HL;
                if (HL < kMinChildHessian || HR < kMinChildHessian)
                    continue;
                const double gain = score(GL, HL) + score(G - GL, HR) - parent;
                if (gain > best.gain) {
                    best.feature = static_cast<int>(f);
                    best.bin = b;
                    best.gain = gain;
                }
            }
        }
        return best;
    }

    const BinnedData& data_;
    const std::vector<std::vector<double>>& edges_;
    std::span<const double> g_;
    std::span<const double> h_;
    const BoostingConfig& config_;
    Tree tree_;
};

} // namespace

std::vector<double> quantile_bin_edges(std::span<const double> column, std::size_t max_bins)
{
    if (max_bins < 2 || max_bins > 256)
        fail_input("max_bins must lie in [2, 256], got " + std::to_string(max_bins));
    std::vector<double> sorted(column.begin(), column.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> distinct = sorted;
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::vector<double> edges;
    if (distinct.size() <= max_bins) {
        for (std::size_t i = 1; i < distinct.size(); ++i) {
            double mid = distinct[i - 1] + (distinct[i] - distinct[i - 1]) / 2.0;
            if (!(mid < distinct[i]))
                mid = distinct[i - 1];
            edges.push_back(mid);
        }
        return edges;
    }

    const std::size_t n = sorted.size();
    for (std::size_t b = 1; b < max_bins; ++b) {
        const std::size_t pos = b * n / max_bins;
        const double lo = sorted[pos - 1];
        const double hi = sorted[pos];
        double edge = lo + (hi - lo) / 2.0;
        if (!(edge < hi))
            edge = lo;
        if (edges.empty() || edge > edges.back())
            edges.push_back(edge);
    }
    if (!edges.empty() && !(edges.back() < sorted.back()))
        edges.pop_back();
    return edges;
}

std::size_t bin_index(std::span<const double> edges, double x)
{
    return static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), x) - edges.begin());
}

BoostingFit fit_boosted(const Matrix& X, std::span<const int> y, const BoostingConfig& config)
{
    if (X.rows() != y.size())
        fail_input("feature matrix has " + std::to_string(X.rows()) + " rows but " + std::to_string(y.size()) +
                   " labels were given");
    const auto positives = static_cast<double>(std::count_if(y.begin(), y.end(), [](int v) { return v != 0; }));
    const auto n = static_cast<double>(y.size());
    if (positives == 0.0 || positives == n)
        fail_input("boosting needs both classes present");

    BoostingFit fit;
    auto& model = fit.model;
    model.learning_rate = config.learning_rate;
    model.n_features = X.cols();
    const double rate = positives / n;
    model.initial_log_odds = std::log(rate / (1.0 - rate));

    model.bin_edges.resize(X.cols());
    parallel_for(X.cols(), [&](std::size_t c) {
        const auto column = X.column(c);
        model.bin_edges[c] = quantile_bin_edges(column, config.max_bins);
    });

    BinnedData data;
    data.rows = X.rows();
    data.cols = X.cols();
    data.bins.resize(X.rows() * X.cols());
    data.bin_counts.resize(X.cols());
    for (std::size_t c = 0; c < X.cols(); ++c)
        data.bin_counts[c] = model.bin_edges[c].size() + 1;
    for (std::size_t r = 0; r < X.rows(); ++r)
        for (std::size_t c = 0; c < X.cols(); ++c)
            data.bins[r * X.cols() + c] = static_cast<std::uint8_t>(bin_index(model.bin_edges[c], X(r, c)));

    std::vector<double> raw(X.rows(), model.initial_log_odds);
    std::vector<double> gradient(X.rows());
    std::vector<double> hessian(X.rows());
    std::vector<std::size_t> all_rows(X.rows());
    for (std::size_t i = 0; i < all_rows.size(); ++i)
        all_rows[i] = i;

    double loss = mean_bce(raw, y);
    fit.loss_trace.push_back(loss);

    std::vector<double> stage_output(X.rows());
    std::vector<double> candidate(X.rows());
    for (std::size_t stage = 0; stage < config.n_stages; ++stage) {
        for (std::size_t i = 0; i < raw.size(); ++i) {
            const double p = sigmoid(raw[i]);
            gradient[i] = p - (y[i] != 0 ? 1.0 : 0.0);
            hessian[i] = p * (1.0 - p);
        }
        Tree tree = StageBuilder(data, model.bin_edges, gradient, hessian, config).build(all_rows);
        for (std::size_t i = 0; i < raw.size(); ++i)
            stage_output[i] = tree.predict(X.row(i));

        constexpr int kMaxHalvings = 30;
        double scale = 1.0;
        double new_loss = loss;
        for (int attempt = 0; attempt <= kMaxHalvings; ++attempt, scale *= 0.5) {
            for (std::size_t i = 0; i < raw.size(); ++i)
                candidate[i] = raw[i] + config.learning_rate * scale * stage_output[i];
            new_loss = mean_bce(candidate, y);
            if (new_loss <= loss)
                break;
        }
        if (!(new_loss <= loss)) {
            scale = 0.0;
            new_loss = loss;
        } else {
            raw.swap(candidate);
        }
        if (!std::isfinite(new_loss))
            fail_training("boosting loss became non-finite at stage " + std::to_string(stage + 1));
        if (scale != 1.0)
            for (auto& node : tree.nodes)
                node.value *= scale;

        loss = new_loss;
        fit.loss_trace.push_back(loss);
        model.stages.push_back(std::move(tree));
    }
    return fit;
}

double raw_score(const BoostedModel& model, std::span<const double> x)
{
    double sum = 0.0;
    for (const auto& stage : model.stages)
        sum += stage.predict(x);
    return model.initial_log_odds + model.learning_rate * sum;
}

double predict(const BoostedModel& model, std::span<const double> x)
{
    return sigmoid(raw_score(model, x));
}

} // namespace codeorigin::learners
