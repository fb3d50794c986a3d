#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tvar/rng.hpp"

namespace tvar::lab {

// Two-hypothesis testing problem for the pointwise estimation rate:
//
//   signal:  X_k = f_amp 1{k <= n_star} X_{k-1} + eps_k
//   null:    X_k = eps_k
//
// with eps_k iid Gamma(a, b), a in (0, 2). The amplitude is tied to the
// local sample size n_star = round(N^(a beta / (a beta + 1))) through
// f_amp = (c_f n_star)^(-1/a), and tau = log^2 N truncates the support of
// the moment diagnostics. The shared initial value X_0 is an extra
// Gamma(a, b) draw under both hypotheses, so the likelihood ratio below is
// exact given X_0.
struct HypothesisPair {
    std::size_t N = 0;
    double a = 1.0;
    double b = 1.0;
    double beta = 1.0;
    double c_f = 1.0;
    std::size_t n_star = 0;
    double f_amp = 0.0;
    double tau = 0.0;

    // Throws config_error unless a in (0, 2) and the rest are positive.
    static HypothesisPair make(std::size_t N, double a, double b, double beta, double c_f);

    double coefficient(double u) const {  // the signal-hypothesis curve
        return u <= static_cast<double>(n_star) / static_cast<double>(N) ? f_amp : 0.0;
    }
};

// x[0..N]; x[0] is the initial draw. `length` counts the stored values
// x_0..x_{length-1}; the likelihood ratio reads only x_0..x_{n_star}, so
// callers that evaluate nothing else may simulate just that prefix.
struct LabSample {
    std::vector<double> x;
};

LabSample simulate_null(const HypothesisPair& hp, SeededRng& rng, std::size_t length = 0);
LabSample simulate_signal(const HypothesisPair& hp, SeededRng& rng, std::size_t length = 0);

// Per-step log-likelihood-ratio increment
//
//   U = (a-1) log(1 - f x_prev / x_cur) 1{x_cur > f x_prev, x_prev <= tau}
//       + b f x_prev 1{x_prev <= tau}.
double lr_increment(double x_prev, double x_cur, const HypothesisPair& hp);

// Likelihood ratio d(signal)/d(null) over the first n_star steps, evaluated
// two ways: as the running product of per-step density ratios (rn_value) and
// as exp of the summed increments (log_sum_u). Both agree whenever all
// indicator and truncation events pass.
struct LikelihoodEvaluation {
    double rn_value = 1.0;       // product form, no truncation
    double log_sum_u = 0.0;      // sum of lr_increment terms
    int indicator_product = 1;   // prod 1{x_k > f x_{k-1}}, k = 1..n_star
    int truncation_ok = 1;       // 1{max_{0<=k<=n_star-1} x_k <= tau}
};

LikelihoodEvaluation likelihood_ratio(const LabSample& sample, const HypothesisPair& hp);

// Monte Carlo first and second moments of the increment under the null,
// reported relative to f_amp^a. Requires 2 f_amp tau <= 1 (config_error).
struct MomentReport {
    double f_amp_pow_a = 0.0;
    double mean_u = 0.0;
    double mean_u2 = 0.0;
    double var_u = 0.0;
    double ratio_mean = 0.0;    // |E U| / f^a
    double ratio_second = 0.0;  // E U^2 / f^a
    double ratio_var = 0.0;     // Var U / f^a
    std::size_t reps = 0;
};

MomentReport moment_check(const HypothesisPair& hp, std::size_t reps, std::uint64_t seed,
                          int threads = 1);

// Frequency under the null of all indicators passing.
double indicator_check(const HypothesisPair& hp, std::size_t reps, std::uint64_t seed,
                       int threads = 1);

// Grid for the testing functional below: kNpGridPoints log-spaced values of
// x over [1e-3, 1e3].
inline constexpr int kNpGridPoints = 50;

// Likelihood-ratio test risk: simulate under both hypotheses, decide signal
// when rn_value > 1, and sum the two error frequencies. Also reports the
// empirical sup over the log grid above of x/(1+x) P_null(rn >= x).
struct RiskReport {
    double risk = 0.0;
    double np_functional = 0.0;
    double type_signal_error = 0.0;  // P_signal(decide null)
    double type_null_error = 0.0;    // P_null(decide signal)
    std::size_t reps = 0;
};

RiskReport test_risk(const HypothesisPair& hp, std::size_t reps, std::uint64_t seed,
                     int threads = 1);

// Frequency under the null of max_{0<=k<=N} X_k <= log^2 N.
double truncation_check(const HypothesisPair& hp, std::size_t reps, std::uint64_t seed,
                        int threads = 1);

}  // namespace tvar::lab
