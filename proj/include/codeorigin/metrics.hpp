#pragma once

#include <cstddef>
#include <span>

namespace codeorigin::evaluation {

/// Predicted probabilities paired with 0/1 labels, same length.
struct ScoredSet {
    std::span<const double> scores;
    std::span<const int> labels;
};

struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }
    friend bool operator==(const Confusion&, const Confusion&) = default;
};

struct ThresholdedMetrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// A sample is predicted machine-generated iff score >= tau.
Confusion confusion_at(const ScoredSet& scored, double tau);

/// 0/0 precision or recall is 0, and F1 is 0 when P + R = 0.
ThresholdedMetrics thresholded_metrics(const Confusion& confusion);

/// Probability that a random positive outscores a random negative, ties
/// counting one half (Mann-Whitney with mid-ranks). Needs both classes.
double roc_auc(const ScoredSet& scored);

/// Average precision: sum over tied score blocks, in descending order, of
/// (recall gained in the block) x (precision after the block). Needs at
/// least one positive.
double pr_auc(const ScoredSet& scored);

/// F1-maximising threshold among the distinct scores and 1.0. Equal F1
/// resolves to the larger threshold. Needs both classes.
double calibrate_threshold(const ScoredSet& scored);

} // namespace codeorigin::evaluation
