#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "tvar/lp.hpp"
#include "tvar/process.hpp"

namespace tvar {

// Largest integer strictly below beta; the degree of the local fit.
int poly_degree(double beta);

// One local fit: the polynomial p(y) = sum_i b_i (y - x)^i maximizing the sum
// of p over the window design points subject to p(k/N) <= Y_k on the window.
// The level estimate is the constant coefficient, f_hat = b_0.
struct LocalFit {
    double x = 0.0;
    double h = 0.0;
    int degree = 0;
    std::vector<double> coefficients;
    double f_hat = 0.0;
    std::size_t n_local = 0;
    lp::Status lp_status = lp::Status::Optimal;
};

// Degree 0 reduces exactly to the window minimum of Y and is computed that
// way (bit-identical to the direct minimum); higher degrees go through the
// LP engine. Throws window_too_small_error when the window holds fewer than
// degree+1 points.
LocalFit fit_local(const RegressionSample& sample, double x, double h, double beta);

// Rate-balancing bandwidth N^(-1/(a*beta + 1)).
double optimal_bandwidth(std::size_t N, double a, double beta);

// Clamp at tau: values with |f_hat| > tau map to tau.
double truncate_estimate(double f_hat, double tau);

struct CurvePoint {
    double x = 0.0;
    double h = 0.0;
    std::size_t n_local = 0;
    double f_hat = 0.0;
    double f_hat_truncated = 0.0;
    lp::Status lp_status = lp::Status::Optimal;
};

// Fits every grid point with h (given, or the rate-balancing default) and
// truncates at tau = log^2(n_local). Grid points are independent; `threads`
// > 1 evaluates them in parallel with identical results.
std::vector<CurvePoint> estimate_curve(const RegressionSample& sample,
                                       std::span<const double> grid, double a, double beta,
                                       std::optional<double> h_override = std::nullopt,
                                       int threads = 1);

// Mean-centered least-squares slope of X_k on X_{k-1} over the window; the
// comparison estimator for the regular regime. Throws
// degenerate_window_error when the regressor has zero variance.
double ols_baseline(const Path& path, double x, double h);

// Minima of eps_k / X_{k-1} over the 2J sub-bins of [x-h, x+h]; bins that
// poke outside [0,1] are skipped.
struct BinMinima {
    std::size_t J = 0;
    std::vector<double> z;                          // one per retained bin
    std::vector<std::pair<double, double>> bins;    // [lo, hi] per retained bin
    std::vector<std::size_t> bin_index;             // 1-based index j
};

BinMinima bin_minima(const Path& path, double x, double h, std::size_t J);

// CSV with header "x,h,n_local,f_hat,f_hat_truncated,lp_status".
void write_curve_csv(std::span<const CurvePoint> curve, std::ostream& os);

}  // namespace tvar
