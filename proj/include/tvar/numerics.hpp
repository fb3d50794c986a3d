#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tvar {

// Regularized lower incomplete gamma function P(a, x), relative accuracy
// better than 1e-12 over the parameter ranges used here.
double regularized_gamma_p(double a, double x);

double mean_of(std::span<const double> xs);
double variance_of(std::span<const double> xs);  // unbiased (n-1 denominator)
double median_of(std::vector<double> xs);        // by value: sorts a copy

// Standard error of the sample mean.
double stderr_of_mean(std::span<const double> xs);

// Least-squares line y = intercept + slope * x. `degenerate` is set when
// fewer than two points are given or the x values have zero variance.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double r2 = 0.0;
    std::size_t n = 0;
    bool degenerate = true;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Kolmogorov-Smirnov distance between a sample and a reference CDF.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

}  // namespace tvar
