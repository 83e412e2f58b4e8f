#include "codeorigin/scaler.hpp"

#include "codeorigin/error.hpp"

#include <algorithm>
#include <cmath>

namespace codeorigin::learners {

namespace {

// A column whose spread is at rounding level relative to its magnitude is
// treated as constant.
bool is_zero_spread(double stddev, double mean)
{
    return !(stddev > 1e-12 * std::max(1.0, std::abs(mean)));
}

} // namespace

Scaler fit_scaler(const Matrix& X)
{
    if (X.rows() < 2)
        fail_input("fitting a scaler needs at least 2 rows, got " + std::to_string(X.rows()));
    const auto n = static_cast<double>(X.rows());
    Scaler scaler{std::vector<double>(X.cols(), 0.0), std::vector<double>(X.cols(), 0.0)};
    for (std::size_t c = 0; c < X.cols(); ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < X.rows(); ++r)
            sum += X(r, c);
        const double mean = sum / n;
        double sq = 0.0;
        for (std::size_t r = 0; r < X.rows(); ++r) {
            const double d = X(r, c) - mean;
            sq += d * d;
        }
        scaler.mean[c] = mean;
        scaler.stddev[c] = std::sqrt(sq / n);
    }
    return scaler;
}

Matrix apply_scaler(const Scaler& scaler, const Matrix& X)
{
    if (X.cols() != scaler.mean.size())
        fail_input("scaler expects " + std::to_string(scaler.mean.size()) + " columns, got " +
                   std::to_string(X.cols()));
    Matrix out(X.rows(), X.cols());
    for (std::size_t c = 0; c < X.cols(); ++c) {
        const double mean = scaler.mean[c];
        const double sd = scaler.stddev[c];
        const bool constant = is_zero_spread(sd, mean);
        for (std::size_t r = 0; r < X.rows(); ++r)
            out(r, c) = constant ? 0.0 : (X(r, c) - mean) / sd;
    }
    return out;
}

} // namespace codeorigin::learners
