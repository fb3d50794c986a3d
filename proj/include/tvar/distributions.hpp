#pragma once

#include <string>
#include <string_view>

#include "tvar/rng.hpp"

namespace tvar {

enum class DistKind { Gamma, Weibull, PowerUniform };

// One-sided innovation law on [0, inf) whose CDF behaves like
// constant * y^shape near the origin:
//
//   F(y) = decay_constant * y^shape + O(y^(shape + decay_remainder_exponent)).
//
// Shipped families and their decay triples:
//   gamma(a, b):        F(y) = P(a, b*y),      constant = b^a / Gamma(a+1), remainder exponent 1
//   weibull(a):         F(y) = 1 - exp(-y^a),  constant = 1,                remainder exponent a
//   poweruniform(a):    F(y) = y^a on [0, 1],  constant = 1,                remainder exactly 0
//
// Values are immutable and safe to share across threads; generator state is
// passed in explicitly and never shared.
struct InnovationDist {
    DistKind kind = DistKind::Gamma;
    double shape = 1.0;  // decay exponent at the origin
    double rate = 1.0;   // Gamma rate; fixed to 1 for the other families

    double decay_constant = 1.0;
    double decay_remainder_exponent = 1.0;

    // CDF smoothness metadata (Hoelder constant and exponent of F). The
    // exponent convention is min(shape, 1); the constant is the analytic
    // Hoelder/Lipschitz constant of F for that exponent.
    double cdf_smoothness_l = 1.0;
    double cdf_smoothness_beta = 1.0;

    static InnovationDist gamma(double shape, double rate);
    static InnovationDist weibull(double shape);
    static InnovationDist power_uniform(double shape);

    // Parses "gamma(a,b)", "weibull(a)", "poweruniform(a)" case-insensitively.
    static InnovationDist parse(std::string_view spec);
    std::string to_string() const;

    // One strictly positive draw. Weibull and PowerUniform invert the CDF;
    // Gamma uses the Marsaglia-Tsang rejection sampler (shapes below one are
    // boosted through gamma(shape+1) and scaled by u^(1/shape)).
    double sample(SeededRng& rng) const;

    double cdf(double y) const;  // throws std::domain_error for y < 0

    // Closed-form inverse CDF; available for Weibull and PowerUniform only.
    double quantile(double u) const;

    // Analytic p-th moment, p > 0.
    double moment(double p) const;
    double mean() const { return moment(1.0); }
    double variance() const;

    struct Decay {
        double shape;
        double constant;
        double remainder_exponent;
    };
    Decay origin_decay() const { return {shape, decay_constant, decay_remainder_exponent}; }
};

}  // namespace tvar
