#include "codeorigin/metrics.hpp"

#include "codeorigin/error.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace codeorigin::evaluation {

namespace {

void check_lengths(const ScoredSet& scored)
{
    if (scored.scores.size() != scored.labels.size())
        fail_input("scored set has " + std::to_string(scored.scores.size()) + " scores but " +
                   std::to_string(scored.labels.size()) + " labels");
}

std::size_t count_positives(const ScoredSet& scored)
{
    return static_cast<std::size_t>(
        std::count_if(scored.labels.begin(), scored.labels.end(), [](int y) { return y != 0; }));
}

void require_both_classes(const ScoredSet& scored, const char* what)
{
    const std::size_t pos = count_positives(scored);
    if (pos == 0 || pos == scored.labels.size())
        fail_input(std::string(what) + " needs both classes present");
}

/// Indices sorted by descending score; stable so equal scores keep input order.
std::vector<std::size_t> descending_order(const ScoredSet& scored)
{
    std::vector<std::size_t> order(scored.scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scored.scores[a] > scored.scores[b]; });
    return order;
}

double f1_from_counts(double tp, double fp, double fn)
{
    Confusion c;
    c.tp = static_cast<std::size_t>(tp);
    c.fp = static_cast<std::size_t>(fp);
    c.fn = static_cast<std::size_t>(fn);
    return thresholded_metrics(c).f1;
}

} // namespace

Confusion confusion_at(const ScoredSet& scored, double tau)
{
    check_lengths(scored);
    Confusion c;
    for (std::size_t i = 0; i < scored.scores.size(); ++i) {
        const bool predicted = scored.scores[i] >= tau;
        const bool actual = scored.labels[i] != 0;
        if (predicted && actual) ++c.tp;
        else if (predicted) ++c.fp;
        else if (actual) ++c.fn;
        else ++c.tn;
    }
    return c;
}

ThresholdedMetrics thresholded_metrics(const Confusion& c)
{
    const auto tp = static_cast<double>(c.tp);
    const auto fp = static_cast<double>(c.fp);
    const auto fn = static_cast<double>(c.fn);
    const auto n = static_cast<double>(c.total());
    ThresholdedMetrics m;
    m.accuracy = n == 0.0 ? 0.0 : static_cast<double>(c.tp + c.tn) / n;
    m.precision = c.tp + c.fp == 0 ? 0.0 : tp / (tp + fp);
    m.recall = c.tp + c.fn == 0 ? 0.0 : tp / (tp + fn);
    m.f1 = m.precision + m.recall == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

double roc_auc(const ScoredSet& scored)
{
    check_lengths(scored);
    require_both_classes(scored, "ROC-AUC");
    const auto order = descending_order(scored);

    // Walk tied blocks from the top: each positive beats every negative
    // strictly below it and ties half of those in its own block.
    double negatives_below = static_cast<double>(scored.labels.size() - count_positives(scored));
    double wins = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        double pos = 0.0, neg = 0.0;
        while (j < order.size() && scored.scores[order[j]] == scored.scores[order[i]]) {
            (scored.labels[order[j]] != 0 ? pos : neg) += 1.0;
            ++j;
        }
        negatives_below -= neg;
        wins += pos * negatives_below + 0.5 * pos * neg;
        i = j;
    }
    const double n_pos = static_cast<double>(count_positives(scored));
    const double n_neg = static_cast<double>(scored.labels.size()) - n_pos;
    return wins / (n_pos * n_neg);
}

double pr_auc(const ScoredSet& scored)
{
    check_lengths(scored);
    const double n_pos = static_cast<double>(count_positives(scored));
    if (n_pos == 0.0)
        fail_input("PR-AUC needs at least one positive");
    const auto order = descending_order(scored);

    double tp = 0.0, fp = 0.0, ap = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        double pos = 0.0, neg = 0.0;
        while (j < order.size() && scored.scores[order[j]] == scored.scores[order[i]]) {
            (scored.labels[order[j]] != 0 ? pos : neg) += 1.0;
            ++j;
        }
        tp += pos;
        fp += neg;
        if (pos > 0.0)
            ap += (pos / n_pos) * (tp / (tp + fp));
        i = j;
    }
    return ap;
}

double calibrate_threshold(const ScoredSet& scored)
{
    check_lengths(scored);
    require_both_classes(scored, "threshold calibration");
    const auto order = descending_order(scored);
    const double n_pos = static_cast<double>(count_positives(scored));

    // Candidate tau = 1.0 first: predicts positive only scores >= 1.
    double tp = 0.0, fp = 0.0;
    for (auto i : order) {
        if (scored.scores[i] < 1.0)
            break;
        (scored.labels[i] != 0 ? tp : fp) += 1.0;
    }
    double best_tau = 1.0;
    double best_f1 = f1_from_counts(tp, fp, n_pos - tp);

    // Lowering tau through the distinct scores; with ties in F1 the larger
    // tau, seen first, is kept.
    tp = fp = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        const double tau = scored.scores[order[i]];
        std::size_t j = i;
        while (j < order.size() && scored.scores[order[j]] == tau) {
            (scored.labels[order[j]] != 0 ? tp : fp) += 1.0;
            ++j;
        }
        i = j;
        if (tau >= 1.0)
            continue; // covered by the 1.0 candidate
        const double f1 = f1_from_counts(tp, fp, n_pos - tp);
        if (f1 > best_f1) {
            best_f1 = f1;
            best_tau = tau;
        }
    }
    return std::clamp(best_tau, 0.0, 1.0);
}

} // namespace codeorigin::evaluation
