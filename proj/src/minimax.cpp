#include "tvar/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tvar/distributions.hpp"
#include "tvar/errors.hpp"
#include "tvar/parallel.hpp"

namespace tvar::lab {

namespace {

InnovationDist innovation_law(const HypothesisPair& hp) {
    return InnovationDist::gamma(hp.a, hp.b);
}

}  // namespace

HypothesisPair HypothesisPair::make(std::size_t N, double a, double b, double beta,
                                    double c_f) {
    if (!(a > 0.0 && a < 2.0)) {
        throw config_error("hypothesis pair: shape a must lie in (0, 2); got " +
                           std::to_string(a));
    }
    if (!(b > 0.0)) throw config_error("hypothesis pair: rate b must be positive");
    if (!(beta > 0.0)) throw config_error("hypothesis pair: beta must be positive");
    if (!(c_f > 0.0)) throw config_error("hypothesis pair: c_f must be positive");
    if (N < 2) throw config_error("hypothesis pair: N must be at least 2");

    HypothesisPair hp;
    hp.N = N;
    hp.a = a;
    hp.b = b;
    hp.beta = beta;
    hp.c_f = c_f;
    const double exponent = a * beta / (a * beta + 1.0);
    hp.n_star = static_cast<std::size_t>(
        std::max(1.0, std::floor(std::pow(static_cast<double>(N), exponent) + 0.5)));
    hp.f_amp = std::pow(c_f * static_cast<double>(hp.n_star), -1.0 / a);
    hp.tau = std::pow(std::log(static_cast<double>(N)), 2.0);
    return hp;
}

namespace {

std::size_t sample_length(const HypothesisPair& hp, std::size_t length) {
    if (length == 0) return hp.N + 1;
    if (length < hp.n_star + 1) {
        throw config_error("lab sample length must cover x_0..x_{n_star}");
    }
    return std::min(length, hp.N + 1);
}

}  // namespace

LabSample simulate_null(const HypothesisPair& hp, SeededRng& rng, std::size_t length) {
    const InnovationDist law = innovation_law(hp);
    LabSample s;
    s.x.resize(sample_length(hp, length));
    for (double& v : s.x) v = law.sample(rng);
    return s;
}

LabSample simulate_signal(const HypothesisPair& hp, SeededRng& rng, std::size_t length) {
    const InnovationDist law = innovation_law(hp);
    LabSample s;
    s.x.resize(sample_length(hp, length));
    s.x[0] = law.sample(rng);
    for (std::size_t k = 1; k < s.x.size(); ++k) {
        const double coeff = (k <= hp.n_star) ? hp.f_amp : 0.0;
        s.x[k] = coeff * s.x[k - 1] + law.sample(rng);
    }
    return s;
}

double lr_increment(double x_prev, double x_cur, const HypothesisPair& hp) {
    const double f = hp.f_amp;
    double u = 0.0;
    if (x_prev <= hp.tau) {
        if (x_cur > f * x_prev) {
            u += (hp.a - 1.0) * std::log(1.0 - f * x_prev / x_cur);
        }
        u += hp.b * f * x_prev;
    }
    return u;
}

LikelihoodEvaluation likelihood_ratio(const LabSample& sample, const HypothesisPair& hp) {
    LikelihoodEvaluation ev;
    const double f = hp.f_amp;
    double product = 1.0;
    double log_sum = 0.0;
    int indicators = 1;
    for (std::size_t k = 1; k <= hp.n_star; ++k) {
        const double x_prev = sample.x[k - 1];
        const double x_cur = sample.x[k];
        if (x_cur > f * x_prev) {
            product *= std::pow(1.0 - f * x_prev / x_cur, hp.a - 1.0) *
                       std::exp(hp.b * f * x_prev);
        } else {
            product = 0.0;
            indicators = 0;
        }
        log_sum += lr_increment(x_prev, x_cur, hp);
    }
    ev.rn_value = product;
    ev.log_sum_u = log_sum;
    ev.indicator_product = indicators;
    double x_max = 0.0;
    for (std::size_t k = 0; k + 1 <= hp.n_star; ++k) x_max = std::max(x_max, sample.x[k]);
    ev.truncation_ok = (x_max <= hp.tau) ? 1 : 0;
    return ev;
}

MomentReport moment_check(const HypothesisPair& hp, std::size_t reps, std::uint64_t seed,
                          int threads) {
    if (2.0 * hp.f_amp * hp.tau > 1.0) {
        throw config_error("moment_check: requires 2 * f_amp * tau <= 1; got " +
                           std::to_string(2.0 * hp.f_amp * hp.tau));
    }
    if (reps == 0) throw config_error("moment_check: reps must be positive");

    std::vector<double> u(reps);
    par::for_each_index(reps, threads, [&](std::size_t i) {
        SeededRng rng(derive_seed(seed, i));
        const InnovationDist law = innovation_law(hp);
        const double x_prev = law.sample(rng);
        const double x_cur = law.sample(rng);
        u[i] = lr_increment(x_prev, x_cur, hp);
    });

    MomentReport rep;
    rep.reps = reps;
    rep.f_amp_pow_a = std::pow(hp.f_amp, hp.a);
    double s1 = 0.0, s2 = 0.0;
    for (double v : u) {
        s1 += v;
        s2 += v * v;
    }
    rep.mean_u = s1 / static_cast<double>(reps);
    rep.mean_u2 = s2 / static_cast<double>(reps);
    rep.var_u = rep.mean_u2 - rep.mean_u * rep.mean_u;
    rep.ratio_mean = std::abs(rep.mean_u) / rep.f_amp_pow_a;
    rep.ratio_second = rep.mean_u2 / rep.f_amp_pow_a;
    rep.ratio_var = rep.var_u / rep.f_amp_pow_a;
    return rep;
}

double indicator_check(const HypothesisPair& hp, std::size_t reps, std::uint64_t seed,
                       int threads) {
    if (reps == 0) throw config_error("indicator_check: reps must be positive");
    std::vector<unsigned char> pass(reps);
    par::for_each_index(reps, threads, [&](std::size_t i) {
        SeededRng rng(derive_seed(seed, i));
        const InnovationDist law = innovation_law(hp);
        double x_prev = law.sample(rng);
        unsigned char ok = 1;
        for (std::size_t k = 1; k <= hp.n_star; ++k) {
            const double x_cur = law.sample(rng);
            if (!(x_cur > hp.f_amp * x_prev)) {
                ok = 0;
                break;
            }
            x_prev = x_cur;
        }
        pass[i] = ok;
    });
    std::size_t count = 0;
    for (unsigned char v : pass) count += v;
    return static_cast<double>(count) / static_cast<double>(reps);
}

RiskReport test_risk(const HypothesisPair& hp, std::size_t reps, std::uint64_t seed,
                     int threads) {
    if (reps == 0) throw config_error("test_risk: reps must be positive");

    // Null-hypothesis replications: record the likelihood ratio itself so the
    // testing functional can be evaluated on a grid afterwards.
    std::vector<double> rn_null(reps);
    std::vector<unsigned char> signal_correct(reps);
    const std::size_t prefix = hp.n_star + 1;
    par::for_each_index(reps, threads, [&](std::size_t i) {
        SeededRng rng(derive_seed(seed, 2 * i));
        const LabSample s = simulate_null(hp, rng, prefix);
        rn_null[i] = likelihood_ratio(s, hp).rn_value;
    });
    par::for_each_index(reps, threads, [&](std::size_t i) {
        SeededRng rng(derive_seed(seed, 2 * i + 1));
        const LabSample s = simulate_signal(hp, rng, prefix);
        signal_correct[i] = likelihood_ratio(s, hp).rn_value > 1.0 ? 1 : 0;
    });

    RiskReport rep;
    rep.reps = reps;
    std::size_t null_as_signal = 0;
    for (double rn : rn_null) null_as_signal += (rn > 1.0) ? 1 : 0;
    std::size_t signal_missed = 0;
    for (unsigned char ok : signal_correct) signal_missed += ok ? 0 : 1;
    rep.type_null_error = static_cast<double>(null_as_signal) / static_cast<double>(reps);
    rep.type_signal_error = static_cast<double>(signal_missed) / static_cast<double>(reps);
    rep.risk = rep.type_null_error + rep.type_signal_error;

    // sup over x of x/(1+x) P_null(rn >= x) on a log grid.
    std::sort(rn_null.begin(), rn_null.end());
    double best = 0.0;
    for (int i = 0; i < kNpGridPoints; ++i) {
        const double exponent =
            -3.0 + 6.0 * static_cast<double>(i) / (kNpGridPoints - 1);
        const double x = std::pow(10.0, exponent);
        const auto it = std::lower_bound(rn_null.begin(), rn_null.end(), x);
        const double tail = static_cast<double>(rn_null.end() - it) / static_cast<double>(reps);
        best = std::max(best, x / (1.0 + x) * tail);
    }
    rep.np_functional = best;
    return rep;
}

double truncation_check(const HypothesisPair& hp, std::size_t reps, std::uint64_t seed,
                        int threads) {
    if (reps == 0) throw config_error("truncation_check: reps must be positive");
    std::vector<unsigned char> pass(reps);
    par::for_each_index(reps, threads, [&](std::size_t i) {
        SeededRng rng(derive_seed(seed, i));
        const InnovationDist law = innovation_law(hp);
        unsigned char ok = 1;
        for (std::size_t k = 0; k <= hp.N; ++k) {
            if (law.sample(rng) > hp.tau) {
                ok = 0;
                break;
            }
        }
        pass[i] = ok;
    });
    std::size_t count = 0;
    for (unsigned char v : pass) count += v;
    return static_cast<double>(count) / static_cast<double>(reps);
}

}  // namespace tvar::lab
