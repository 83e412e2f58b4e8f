#pragma once

// Slow, obviously-correct reference computations. Deliberately share no code
// with the library so a bug can't hide in both places.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <set>
#include <vector>

namespace oracle {

// P(s+ > s-) + 0.5 P(s+ == s-) over every positive/negative pair.
inline double pairwise_auc(const std::vector<double>& s, const std::vector<int>& y)
{
    double wins = 0.0;
    double pairs = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (y[i] != 1)
            continue;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (y[j] != 0)
                continue;
            pairs += 1.0;
            if (s[i] > s[j])
                wins += 1.0;
            else if (s[i] == s[j])
                wins += 0.5;
        }
    }
    return wins / pairs;
}

// Average precision: walk distinct scores high to low, recount everything at each cut.
inline double rank_walk_ap(const std::vector<double>& s, const std::vector<int>& y)
{
    std::set<double, std::greater<>> cuts(s.begin(), s.end());
    double positives = 0;
    for (int v : y)
        positives += v;
    double ap = 0.0;
    double prev_recall = 0.0;
    for (double cut : cuts) {
        double tp = 0, predicted = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] >= cut) {
                predicted += 1;
                tp += y[i];
            }
        }
        const double recall = tp / positives;
        ap += (recall - prev_recall) * (tp / predicted);
        prev_recall = recall;
    }
    return ap;
}

inline double f1_at(const std::vector<double>& s, const std::vector<int>& y, double tau)
{
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const bool hit = s[i] >= tau;
        if (hit && y[i] == 1)
            tp += 1;
        else if (hit)
            fp += 1;
        else if (y[i] == 1)
            fn += 1;
    }
    if (tp == 0)
        return 0.0;
    const double p = tp / (tp + fp);
    const double r = tp / (tp + fn);
    return 2 * p * r / (p + r);
}

// Best F1 over a dense sweep: every score, every midpoint, and the ends.
struct Sweep {
    double best_f1 = -1;
    double largest_best_candidate = -1; // among {unique scores} ∪ {1.0}
};

inline Sweep exhaustive_f1(const std::vector<double>& s, const std::vector<int>& y)
{
    std::set<double> uniq(s.begin(), s.end());
    std::vector<double> probes(uniq.begin(), uniq.end());
    std::vector<double> grid = probes;
    for (std::size_t i = 1; i < probes.size(); ++i)
        grid.push_back(0.5 * (probes[i - 1] + probes[i]));
    grid.push_back(0.0);
    grid.push_back(1.0);
    grid.push_back(std::nextafter(1.0, 2.0));

    Sweep out;
    for (double t : grid)
        out.best_f1 = std::max(out.best_f1, f1_at(s, y, t));
    probes.push_back(1.0);
    for (double t : probes)
        if (f1_at(s, y, t) == out.best_f1)
            out.largest_best_candidate = std::max(out.largest_best_candidate, t);
    return out;
}

// Random scored set with deliberate ties (scores drawn from a coarse grid half the time).
struct RandomSet {
    std::vector<double> scores;
    std::vector<int> labels;
};

inline RandomSet random_scored_set(std::mt19937_64& rng, std::size_t max_n = 200)
{
    std::uniform_int_distribution<std::size_t> size(2, max_n);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RandomSet out;
    const std::size_t n = size(rng);
    const bool coarse = u(rng) < 0.5;
    const int levels = 1 + static_cast<int>(u(rng) * 10);
    const double positive_rate = 0.05 + 0.9 * u(rng);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = coarse ? std::floor(u(rng) * levels) / levels : u(rng);
        out.scores.push_back(v);
        out.labels.push_back(u(rng) < positive_rate ? 1 : 0);
    }
    // both classes present
    out.labels[0] = 1;
    out.labels[1] = 0;
    return out;
}

// Plain BCE + (l2/2)|w|^2, computed without any library helpers.
inline double bce(const std::vector<double>& w, double b, const std::vector<std::vector<double>>& X,
                  const std::vector<int>& y, double l2)
{
    double loss = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        double z = b;
        for (std::size_t j = 0; j < w.size(); ++j)
            z += w[j] * X[i][j];
        const double p = 1.0 / (1.0 + std::exp(-z));
        loss -= y[i] ? std::log(p) : std::log(1.0 - p);
    }
    loss /= static_cast<double>(X.size());
    double sq = 0.0;
    for (double v : w)
        sq += v * v;
    return loss + 0.5 * l2 * sq;
}

} // namespace oracle
