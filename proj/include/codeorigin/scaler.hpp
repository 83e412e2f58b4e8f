#pragma once

#include "codeorigin/matrix.hpp"

#include <vector>

namespace codeorigin::learners {

/// Per-column training mean and population standard deviation.
struct Scaler {
    std::vector<double> mean;
    std::vector<double> stddev;
};

/// Needs at least two rows.
Scaler fit_scaler(const Matrix& X);

/// (x - mean) / std per column; zero-variance columns map to 0.
Matrix apply_scaler(const Scaler& scaler, const Matrix& X);

} // namespace codeorigin::learners
