#include "codeorigin/logistic.hpp"

#include "codeorigin/error.hpp"

#include <cmath>

namespace codeorigin::learners {

namespace {

double softplus(double z)
{
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double logit(const LinearModel& model, std::span<const double> x)
{
    double z = model.bias;
    for (std::size_t j = 0; j < x.size(); ++j)
        z += model.weights[j] * x[j];
    return z;
}

void check_shapes(const LinearModel& model, const Matrix& X, std::span<const int> y)
{
    if (X.rows() != y.size())
        fail_input("feature matrix has " + std::to_string(X.rows()) + " rows but " + std::to_string(y.size()) +
                   " labels were given");
    if (model.weights.size() != X.cols())
        fail_input("linear model has " + std::to_string(model.weights.size()) + " weights for " +
                   std::to_string(X.cols()) + " columns");
}

} // namespace

double sigmoid(double z)
{
    if (z >= 0.0)
        return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double predict_probability(const LinearModel& model, std::span<const double> x)
{
    return sigmoid(logit(model, x));
}

double logistic_objective(const LinearModel& model, const Matrix& X, std::span<const int> y, double l2_penalty)
{
    check_shapes(model, X, y);
    double loss = 0.0;
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const double z = logit(model, X.row(i));
        // -[y log s(z) + (1-y) log(1-s(z))] = softplus(z) - y z
        loss += softplus(z) - (y[i] != 0 ? z : 0.0);
    }
    loss /= static_cast<double>(X.rows());
    double norm_sq = 0.0;
    for (double w : model.weights)
        norm_sq += w * w;
    return loss + 0.5 * l2_penalty * norm_sq;
}

LinearModel logistic_gradient(const LinearModel& model, const Matrix& X, std::span<const int> y, double l2_penalty)
{
    check_shapes(model, X, y);
    LinearModel grad{std::vector<double>(X.cols(), 0.0), 0.0};
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const auto row = X.row(i);
        const double residual = predict_probability(model, row) - (y[i] != 0 ? 1.0 : 0.0);
        for (std::size_t j = 0; j < row.size(); ++j)
            grad.weights[j] += residual * row[j];
        grad.bias += residual;
    }
    const auto n = static_cast<double>(X.rows());
    for (std::size_t j = 0; j < grad.weights.size(); ++j)
        grad.weights[j] = grad.weights[j] / n + l2_penalty * model.weights[j];
    grad.bias /= n;
    return grad;
}

LogisticFit fit_logistic(const Matrix& X, std::span<const int> y, const LogisticConfig& config)
{
    if (X.rows() == 0)
        fail_input("logistic regression needs at least one sample");
    if (!(config.learning_rate > 0.0))
        fail_input("logistic regression learning rate must be positive");

    LogisticFit fit;
    fit.model.weights.assign(X.cols(), 0.0);
    double loss = logistic_objective(fit.model, X, y, config.l2_penalty);
    fit.loss_trace.push_back(loss);

    constexpr int kMaxHalvings = 40;
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        const LinearModel grad = logistic_gradient(fit.model, X, y, config.l2_penalty);
        double step = config.learning_rate;
        LinearModel candidate;
        double candidate_loss = loss;
        bool accepted = false;
        for (int attempt = 0; attempt <= kMaxHalvings; ++attempt, step *= 0.5) {
            candidate = fit.model;
            for (std::size_t j = 0; j < candidate.weights.size(); ++j)
                candidate.weights[j] -= step * grad.weights[j];
            candidate.bias -= step * grad.bias;
            candidate_loss = logistic_objective(candidate, X, y, config.l2_penalty);
            if (!std::isfinite(candidate_loss))
                fail_training("logistic regression loss became non-finite at epoch " + std::to_string(epoch));
            if (candidate_loss <= loss) {
                accepted = true;
                break;
            }
        }
        if (accepted) {
            fit.model = std::move(candidate);
            loss = candidate_loss;
        }
        fit.loss_trace.push_back(loss);
    }
    return fit;
}

} // namespace codeorigin::learners
