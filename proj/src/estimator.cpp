#include "tvar/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tvar/errors.hpp"
#include "tvar/parallel.hpp"

namespace tvar {

int poly_degree(double beta) {
    if (!(beta > 0.0)) {
        throw std::invalid_argument("poly_degree: beta must be positive");
    }
    return static_cast<int>(std::ceil(beta)) - 1;
}

LocalFit fit_local(const RegressionSample& sample, double x, double h, double beta) {
    const int degree = poly_degree(beta);
    const Window w = window_indices(sample.N, x, h);
    const std::size_t n = w.size();
    if (n < static_cast<std::size_t>(degree) + 1) {
        std::ostringstream os;
        os << "fit_local: window at x = " << x << " holds " << n << " points, degree "
           << degree << " needs " << degree + 1;
        throw window_too_small_error(os.str());
    }

    LocalFit fit;
    fit.x = x;
    fit.h = h;
    fit.degree = degree;
    fit.n_local = n;

    if (degree == 0) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t k = w.lo; k <= w.hi; ++k) {
            m = std::min(m, sample.y[k - 1]);
        }
        fit.coefficients = {m};
        fit.f_hat = m;
        fit.lp_status = lp::Status::Optimal;
        return fit;
    }

    lp::Problem prob;
    prob.objective.assign(static_cast<std::size_t>(degree) + 1, 0.0);
    prob.rows.reserve(n);
    prob.rhs.reserve(n);
    for (std::size_t k = w.lo; k <= w.hi; ++k) {
        const double dt = sample.t[k - 1] - x;
        std::vector<double> row(static_cast<std::size_t>(degree) + 1);
        double power = 1.0;
        for (int i = 0; i <= degree; ++i) {
            row[static_cast<std::size_t>(i)] = power;
            prob.objective[static_cast<std::size_t>(i)] += power;
            power *= dt;
        }
        prob.rows.push_back(std::move(row));
        prob.rhs.push_back(sample.y[k - 1]);
    }

    lp::Solution sol = lp::solve(prob);
    if (sol.status != lp::Status::Optimal && sol.status != lp::Status::DegenerateTie) {
        throw std::runtime_error("fit_local: solver returned " + lp::to_string(sol.status) +
                                 " on a fit problem");
    }
    fit.coefficients = sol.coefficients;
    fit.f_hat = sol.coefficients[0];
    fit.lp_status = sol.status;
    return fit;
}

double optimal_bandwidth(std::size_t N, double a, double beta) {
    if (N < 2) throw std::invalid_argument("optimal_bandwidth: N must be at least 2");
    if (!(a > 0.0)) throw std::invalid_argument("optimal_bandwidth: a must be positive");
    if (!(beta > 0.0)) throw std::invalid_argument("optimal_bandwidth: beta must be positive");
    return std::pow(static_cast<double>(N), -1.0 / (a * beta + 1.0));
}

double truncate_estimate(double f_hat, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("truncate_estimate: tau must be positive");
    return std::abs(f_hat) <= tau ? f_hat : tau;
}

std::vector<CurvePoint> estimate_curve(const RegressionSample& sample,
                                       std::span<const double> grid, double a, double beta,
                                       std::optional<double> h_override, int threads) {
    const double h = h_override.value_or(optimal_bandwidth(sample.N, a, beta));
    std::vector<CurvePoint> out(grid.size());
    par::for_each_index(grid.size(), threads, [&](std::size_t i) {
        const LocalFit fit = fit_local(sample, grid[i], h, beta);
        const double tau = std::pow(std::log(static_cast<double>(fit.n_local)), 2.0);
        CurvePoint& pt = out[i];
        pt.x = grid[i];
        pt.h = h;
        pt.n_local = fit.n_local;
        pt.f_hat = fit.f_hat;
        pt.f_hat_truncated = tau > 0.0 ? truncate_estimate(fit.f_hat, tau) : 0.0;
        pt.lp_status = fit.lp_status;
    });
    return out;
}

double ols_baseline(const Path& path, double x, double h) {
    const Window w = window_indices(path.N, x, h);
    double mean_x = 0.0;
    for (std::size_t k = w.lo; k <= w.hi; ++k) mean_x += path.x[k];
    mean_x /= static_cast<double>(w.size());

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = w.lo; k <= w.hi; ++k) {
        const double reg = path.x[k - 1] - mean_x;
        sxx += reg * reg;
        sxy += reg * (path.x[k] - mean_x);
    }
    if (sxx <= 0.0) {
        throw degenerate_window_error("ols_baseline: regressor variance is zero in the window");
    }
    return sxy / sxx;
}

BinMinima bin_minima(const Path& path, double x, double h, std::size_t J) {
    if (J == 0) throw std::invalid_argument("bin_minima: J must be positive");
    if (!path.has_innovations) {
        throw diagnostics_error("bin_minima: path carries no innovations");
    }
    const std::vector<double> eps_mod = modified_innovations(path);
    BinMinima out;
    out.J = J;
    const double nd = static_cast<double>(path.N);
    for (std::size_t j = 1; j <= 2 * J; ++j) {
        const double lo = x + h * (-1.0 + (static_cast<double>(j) - 1.0) / static_cast<double>(J));
        const double hi = x + h * (-1.0 + static_cast<double>(j) / static_cast<double>(J));
        if (lo < 0.0 || hi > 1.0) continue;  // bin pokes outside the unit interval
        double z = std::numeric_limits<double>::infinity();
        bool seen = false;
        // k/N in [lo, hi]
        std::size_t k_lo = static_cast<std::size_t>(std::max(1.0, std::ceil(lo * nd)));
        for (std::size_t k = k_lo; k <= path.N; ++k) {
            const double t = static_cast<double>(k) / nd;
            if (t < lo) continue;
            if (t > hi) break;
            z = std::min(z, eps_mod[k - 1]);
            seen = true;
        }
        if (!seen) continue;
        out.z.push_back(z);
        out.bins.emplace_back(lo, hi);
        out.bin_index.push_back(j);
    }
    return out;
}

namespace {

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_curve_csv(std::span<const CurvePoint> curve, std::ostream& os) {
    os << "x,h,n_local,f_hat,f_hat_truncated,lp_status\n";
    for (const CurvePoint& pt : curve) {
        os << g17(pt.x) << "," << g17(pt.h) << "," << pt.n_local << "," << g17(pt.f_hat)
           << "," << g17(pt.f_hat_truncated) << "," << lp::to_string(pt.lp_status) << "\n";
    }
}

}  // namespace tvar
