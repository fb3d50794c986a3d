#include "tvar/prediction.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tvar/errors.hpp"

namespace tvar {

std::vector<double> prediction_grid(std::size_t N) {
    std::vector<double> grid(N - 1);
    for (std::size_t k = 2; k <= N; ++k) {
        grid[k - 2] = static_cast<double>(k) / static_cast<double>(N);
    }
    return grid;
}

std::vector<double> plugin_residuals(const Path& path, std::span<const CurvePoint> curve) {
    if (path.N < 3) {
        throw std::invalid_argument("plugin_residuals: need N >= 3");
    }
    if (curve.size() != path.N - 1) {
        std::ostringstream os;
        os << "plugin_residuals: curve has " << curve.size() << " points, expected "
           << path.N - 1 << " (grid k/N for k = 2..N)";
        throw grid_mismatch_error(os.str());
    }
    const double nd = static_cast<double>(path.N);
    std::vector<double> residuals(path.N - 1);
    for (std::size_t k = 2; k <= path.N; ++k) {
        const CurvePoint& pt = curve[k - 2];
        if (std::abs(pt.x - static_cast<double>(k) / nd) > 1e-12) {
            std::ostringstream os;
            os << "plugin_residuals: curve point " << k - 2 << " sits at x = " << pt.x
               << ", expected " << static_cast<double>(k) / nd;
            throw grid_mismatch_error(os.str());
        }
        residuals[k - 2] = path.x[k] - pt.f_hat_truncated * path.x[k - 1];
    }
    return residuals;
}

PredictionResult predict_next(const Path& path, std::span<const CurvePoint> curve) {
    PredictionResult result;
    result.residuals = plugin_residuals(path, curve);
    double sum = 0.0;
    for (double r : result.residuals) sum += r;
    result.residual_mean = sum / static_cast<double>(path.N - 1);
    // The curve's last point is x = N/N = 1.
    result.x_hat_next = path.x[path.N] * curve.back().f_hat_truncated + result.residual_mean;
    return result;
}

}  // namespace tvar
