#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "tvar/coefficient.hpp"
#include "tvar/distributions.hpp"
#include "tvar/rng.hpp"

namespace tvar {

// One realization of the autoregression
//
//   X_k = f(k/N) X_{k-1} + eps_k,  k = 1..N,
//
// with nonnegative iid innovations. X_0 comes from a burn-in recursion run
// with the frozen left-boundary coefficient f(0), long enough that the
// truncated pre-history is below double round-off (rho^burnin < 1e-14). The
// burn-in innovations are retained so the remote part of the moving-average
// representation can be evaluated exactly for lags up to the burn-in length.
struct Path {
    std::size_t N = 0;
    std::vector<double> x;              // X_0..X_N
    std::vector<double> innovations;    // eps_1..eps_N
    std::uint64_t seed = 0;
    std::optional<CoefficientFunction> truth;
    std::optional<InnovationDist> dist;
    std::vector<double> prehistory;     // eps_{-B}..eps_0
    bool has_innovations = false;
};

Path simulate_path(const CoefficientFunction& f, const InnovationDist& dist,
                   std::size_t n_steps, std::uint64_t seed);

// Same recursion, drawing from a caller-owned generator; the generator is
// left positioned after the last innovation so callers can extend the path.
Path simulate_path_core(const CoefficientFunction& f, const InnovationDist& dist,
                        std::size_t n_steps, std::uint64_t seed, SeededRng& rng);

// Ratios Y_k = X_k / X_{k-1} = f(k/N) + eps_k / X_{k-1}, k = 1..N.
struct RegressionSample {
    std::size_t N = 0;
    std::vector<double> t;  // k/N
    std::vector<double> y;
};

RegressionSample regression_transform(const Path& path);

// Indices k in {1..N} with |k/N - x| <= h. Throws empty_window_error when no
// design point lands in the band.
struct Window {
    std::size_t lo = 0;
    std::size_t hi = 0;  // inclusive
    std::size_t size() const { return hi - lo + 1; }
};

Window window_indices(std::size_t N, double x, double h);

// eps_k / X_{k-1} for k = 1..N; requires retained innovations.
std::vector<double> modified_innovations(const Path& path);

// Average over k = 1..N of the remote tail of the moving-average expansion,
//
//   sum_{i > lag} f(k/N) f((k-1)/N) ... eps_{k-i},
//
// evaluated from the retained pre-history. Requires lag <= burn-in length.
double tail_split_norm(const Path& path, std::size_t lag);

// CSV with header "k,t,X,eps" and 17-significant-digit floats. The eps cell
// of the k = 0 row is written as 0.
void write_path_csv(const Path& path, std::ostream& os);
Path read_path_csv(std::istream& is);

}  // namespace tvar
