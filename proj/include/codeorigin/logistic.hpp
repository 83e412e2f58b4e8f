#pragma once

#include "codeorigin/matrix.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace codeorigin::learners {

struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
};

struct LogisticConfig {
    double learning_rate = 0.1;
    std::size_t epochs = 300;
    double l2_penalty = 1e-4;
    std::uint64_t seed = 42;
};

double sigmoid(double z);

/// sigma(w.x + b)
double predict_probability(const LinearModel& model, std::span<const double> x);

/// Mean binary cross-entropy plus (l2 / 2) * ||w||^2. The bias is not
/// penalised. Evaluated through softplus so saturated logits stay finite.
double logistic_objective(const LinearModel& model, const Matrix& X, std::span<const int> y, double l2_penalty);

/// Analytic gradient of logistic_objective, returned in the model's shape:
/// X^T (p - y) / n + l2 * w, and mean(p - y) for the bias.
LinearModel logistic_gradient(const LinearModel& model, const Matrix& X, std::span<const int> y, double l2_penalty);

struct LogisticFit {
    LinearModel model;
    std::vector<double> loss_trace; // objective before the first epoch and after each one
};

/// Full-batch gradient descent from w = 0, b = 0. When a step would raise the
/// objective it is halved until it does not, so the trace never increases.
LogisticFit fit_logistic(const Matrix& X, std::span<const int> y, const LogisticConfig& config = {});

} // namespace codeorigin::learners
