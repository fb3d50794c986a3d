#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tvar/estimator.hpp"
#include "tvar/process.hpp"

namespace tvar {

// One-step-ahead prediction by plugin residuals:
//
//   eps_hat_k = X_k - f_hat^tau(k/N) X_{k-1},   k = 2..N,
//   X_hat_{N+1} = X_N f_hat^tau(1) + mean(eps_hat_2..eps_hat_N).
struct PredictionResult {
    double x_hat_next = 0.0;
    double residual_mean = 0.0;
    std::vector<double> residuals;  // eps_hat_2..eps_hat_N
    std::optional<double> mse_estimate;
};

// The curve must be evaluated exactly on the grid {k/N : k = 2..N}; a
// mismatch throws grid_mismatch_error. Truncated values are used.
std::vector<double> plugin_residuals(const Path& path, std::span<const CurvePoint> curve);

PredictionResult predict_next(const Path& path, std::span<const CurvePoint> curve);

// The prediction grid {2/N, 3/N, ..., 1}.
std::vector<double> prediction_grid(std::size_t N);

}  // namespace tvar
