#include "tvar/process.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "tvar/errors.hpp"

namespace tvar {

namespace {

// Shortest burn-in with rho^B below double round-off.
std::size_t burnin_length(double rho) {
    if (rho <= 0.0) return 1;
    const double b = std::ceil(std::log(1e-14) / std::log(rho));
    return static_cast<std::size_t>(std::max(1.0, b));
}

}  // namespace

Path simulate_path_core(const CoefficientFunction& f, const InnovationDist& dist,
                        std::size_t n_steps, std::uint64_t seed, SeededRng& rng) {
    if (n_steps < 2) {
        throw std::invalid_argument("simulate_path: need at least two steps");
    }
    const std::size_t burnin = burnin_length(f.rho);

    Path path;
    path.N = n_steps;
    path.seed = seed;
    path.truth = f;
    path.dist = dist;
    path.has_innovations = true;
    path.prehistory.resize(burnin + 1);
    path.x.resize(n_steps + 1);
    path.innovations.resize(n_steps);

    const double f0 = f(0.0);
    double state = 0.0;
    for (std::size_t i = 0; i <= burnin; ++i) {
        const double eps = dist.sample(rng);
        path.prehistory[i] = eps;
        state = (i == 0) ? eps : f0 * state + eps;
    }
    path.x[0] = state;

    const double n_inv = 1.0 / static_cast<double>(n_steps);
    for (std::size_t k = 1; k <= n_steps; ++k) {
        const double eps = dist.sample(rng);
        path.innovations[k - 1] = eps;
        state = f(static_cast<double>(k) * n_inv) * state + eps;
        path.x[k] = state;
    }
    return path;
}

Path simulate_path(const CoefficientFunction& f, const InnovationDist& dist,
                   std::size_t n_steps, std::uint64_t seed) {
    SeededRng rng(seed);
    return simulate_path_core(f, dist, n_steps, seed, rng);
}

RegressionSample regression_transform(const Path& path) {
    RegressionSample sample;
    sample.N = path.N;
    sample.t.resize(path.N);
    sample.y.resize(path.N);
    const double n_inv = 1.0 / static_cast<double>(path.N);
    for (std::size_t k = 1; k <= path.N; ++k) {
        const double prev = path.x[k - 1];
        if (!(prev > 0.0)) {
            throw degenerate_path_error("regression_transform: X_" + std::to_string(k - 1) +
                                        " is not positive");
        }
        sample.t[k - 1] = static_cast<double>(k) * n_inv;
        sample.y[k - 1] = path.x[k] / prev;
    }
    return sample;
}

Window window_indices(std::size_t N, double x, double h) {
    if (!(h > 0.0)) {
        throw std::invalid_argument("window_indices: bandwidth must be positive");
    }
    const double nd = static_cast<double>(N);
    const auto inside = [&](std::size_t k) {
        return std::abs(static_cast<double>(k) / nd - x) <= h;
    };
    // Candidate bounds from the arithmetic, then exact membership checks on
    // the edges to keep the set identical to the defining predicate.
    double lo_d = std::ceil((x - h) * nd);
    double hi_d = std::floor((x + h) * nd);
    std::size_t lo = (lo_d < 1.0) ? 1 : static_cast<std::size_t>(lo_d);
    std::size_t hi = (hi_d > nd) ? N : (hi_d < 0.0 ? 0 : static_cast<std::size_t>(hi_d));
    while (lo > 1 && inside(lo - 1)) --lo;
    while (lo <= N && !inside(lo)) ++lo;
    while (hi < N && inside(hi + 1)) ++hi;
    while (hi >= 1 && !inside(hi)) --hi;
    if (lo > N || hi < 1 || lo > hi) {
        std::ostringstream os;
        os << "window_indices: no design point within " << h << " of x = " << x;
        throw empty_window_error(os.str());
    }
    return Window{lo, hi};
}

std::vector<double> modified_innovations(const Path& path) {
    if (!path.has_innovations) {
        throw diagnostics_error("modified_innovations: path carries no innovations");
    }
    std::vector<double> out(path.N);
    for (std::size_t k = 1; k <= path.N; ++k) {
        if (!(path.x[k - 1] > 0.0)) {
            throw degenerate_path_error("modified_innovations: X_" + std::to_string(k - 1) +
                                        " is not positive");
        }
        out[k - 1] = path.innovations[k - 1] / path.x[k - 1];
    }
    return out;
}

double tail_split_norm(const Path& path, std::size_t lag) {
    if (!path.has_innovations || !path.truth.has_value() || path.prehistory.empty()) {
        throw diagnostics_error("tail_split_norm: path carries no diagnostic pre-history");
    }
    const std::size_t burnin = path.prehistory.size() - 1;
    // With a vanishing coefficient every tail term is exactly zero, so any
    // lag is representable; otherwise exactness needs lag within the burn-in.
    if (lag > burnin && path.truth->rho > 0.0) {
        throw diagnostics_error("tail_split_norm: lag exceeds retained pre-history (" +
                                std::to_string(burnin) + ")");
    }
    const CoefficientFunction& f = *path.truth;
    const double nd = static_cast<double>(path.N);
    // eps_j for j = -B..N laid out contiguously.
    const auto eps_at = [&](long long j) {
        return j <= 0 ? path.prehistory[static_cast<std::size_t>(j + static_cast<long long>(burnin))]
                      : path.innovations[static_cast<std::size_t>(j - 1)];
    };
    double total = 0.0;
    for (std::size_t k = 1; k <= path.N; ++k) {
        // weight of eps_{k-i} is the product f(k/N) f((k-1)/N) ... over i factors
        double weight = 1.0;
        std::size_t i = 0;
        double sum_k = 0.0;
        const long long kk = static_cast<long long>(k);
        while (kk - static_cast<long long>(i) >= -static_cast<long long>(burnin)) {
            if (i > lag && i >= 1) {
                sum_k += weight * eps_at(kk - static_cast<long long>(i));
            }
            weight *= f((static_cast<double>(kk) - static_cast<double>(i)) / nd);
            if (weight == 0.0) break;
            ++i;
        }
        total += sum_k;
    }
    return total / nd;
}

namespace {

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_path_csv(const Path& path, std::ostream& os) {
    os << "k,t,X,eps\n";
    const double nd = static_cast<double>(path.N);
    for (std::size_t k = 0; k <= path.N; ++k) {
        const double eps = (k == 0) ? 0.0 : path.innovations[k - 1];
        os << k << "," << g17(static_cast<double>(k) / nd) << "," << g17(path.x[k]) << ","
           << g17(eps) << "\n";
    }
}

Path read_path_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("k,t,X,eps", 0) != 0) {
        throw config_error("path CSV: missing mandatory header 'k,t,X,eps'");
    }
    Path path;
    std::vector<double> xs;
    std::vector<double> eps;
    std::size_t expected_k = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 4) {
            throw config_error("path CSV: expected 4 columns, got " + std::to_string(cells.size()));
        }
        const std::size_t k = static_cast<std::size_t>(std::stoull(cells[0]));
        if (k != expected_k) {
            throw config_error("path CSV: rows must be consecutive in k");
        }
        xs.push_back(std::stod(cells[2]));
        if (k > 0) eps.push_back(std::stod(cells[3]));
        ++expected_k;
    }
    if (xs.size() < 3) {
        throw config_error("path CSV: need at least rows k = 0..2");
    }
    path.N = xs.size() - 1;
    path.x = std::move(xs);
    path.innovations = std::move(eps);
    path.has_innovations = true;  // columns came from the file
    return path;
}

}  // namespace tvar
