#pragma once

#include "codeorigin/tree.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace codeorigin::learners {

struct BoostingConfig {
    std::size_t n_stages = 200;
    double learning_rate = 0.1;
    std::size_t max_bins = 255; // at most 256
    std::size_t max_depth = 6;
    std::size_t min_samples_leaf = 20;
    double l2_regularization = 0.0;
    std::uint64_t seed = 42;
};

/// Histogram gradient boosting for log-loss.
/// score(x) = sigma(initial_log_odds + learning_rate * sum of stage outputs).
/// Stage thresholds are bin upper edges, so x <= threshold is the same test
/// as bin(x) <= bin.
struct BoostedModel {
    std::vector<Tree> stages;
    double learning_rate = 0.1;
    std::vector<std::vector<double>> bin_edges; // per feature, strictly increasing
    double initial_log_odds = 0.0;
    std::size_t n_features = 0;
};

/// Quantile bin edges for one column, at most max_bins - 1 of them. With no
/// more than max_bins distinct values the edges are the midpoints between
/// neighbours, so binning loses nothing.
std::vector<double> quantile_bin_edges(std::span<const double> column, std::size_t max_bins);

/// Number of edges strictly below x.
std::size_t bin_index(std::span<const double> edges, double x);

struct BoostingFit {
    BoostedModel model;
    std::vector<double> loss_trace; // training BCE after 0, 1, ..., n_stages stages
};

/// Each stage is a depth-wise regression tree on the binned features fitted
/// to the BCE gradient, with Newton leaf values sum(y - p) / (sum p(1-p) + l2).
/// A stage that would raise the training loss is shrunk by halving.
BoostingFit fit_boosted(const Matrix& X, std::span<const int> y, const BoostingConfig& config = {});

double raw_score(const BoostedModel& model, std::span<const double> x);
double predict(const BoostedModel& model, std::span<const double> x);

} // namespace codeorigin::learners
