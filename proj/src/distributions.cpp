#include "tvar/distributions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "tvar/errors.hpp"
#include "tvar/numerics.hpp"

namespace tvar {

namespace {

void require_positive_shape(double shape) {
    if (!(shape > 0.0) || !std::isfinite(shape)) {
        throw config_error("distribution shape must be a positive finite real");
    }
}

// Marsaglia-Tsang for shape >= 1, rate 1.
double gamma_rejection(double shape, SeededRng& rng) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = rng.normal();
        const double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        const double v = t * t * t;
        const double u = rng.uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) {
            return d * v;
        }
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

// Maximum of the Weibull density a y^(a-1) exp(-y^a) for a > 1.
double weibull_density_max(double a) {
    const double mode = std::pow((a - 1.0) / a, 1.0 / a);
    return a * std::pow(mode, a - 1.0) * std::exp(-std::pow(mode, a));
}

// Maximum of the gamma density b^a x^(a-1) e^(-bx) / Gamma(a) for a > 1.
double gamma_density_max(double a, double b) {
    const double log_peak = a * std::log(b) + (a - 1.0) * (std::log((a - 1.0) / b)) -
                            (a - 1.0) - std::lgamma(a);
    return std::exp(log_peak);
}

std::vector<double> parse_args(std::string_view inner, std::size_t expected,
                               std::string_view spec) {
    std::vector<double> out;
    std::string token;
    std::stringstream ss{std::string(inner)};
    while (std::getline(ss, token, ',')) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(token, &pos);
            while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) ++pos;
            if (pos != token.size()) throw std::invalid_argument(token);
            out.push_back(v);
        } catch (const std::exception&) {
            throw config_error("bad numeric argument in distribution spec '" + std::string(spec) + "'");
        }
    }
    if (out.size() != expected) {
        throw config_error("distribution spec '" + std::string(spec) + "' expects " +
                           std::to_string(expected) + " argument(s)");
    }
    return out;
}

}  // namespace

InnovationDist InnovationDist::gamma(double shape, double rate) {
    require_positive_shape(shape);
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw config_error("gamma rate must be a positive finite real");
    }
    InnovationDist d;
    d.kind = DistKind::Gamma;
    d.shape = shape;
    d.rate = rate;
    d.decay_constant = std::exp(shape * std::log(rate) - std::lgamma(shape + 1.0));
    d.decay_remainder_exponent = 1.0;
    d.cdf_smoothness_beta = std::min(shape, 1.0);
    d.cdf_smoothness_l = (shape <= 1.0) ? d.decay_constant : gamma_density_max(shape, rate);
    return d;
}

InnovationDist InnovationDist::weibull(double shape) {
    require_positive_shape(shape);
    InnovationDist d;
    d.kind = DistKind::Weibull;
    d.shape = shape;
    d.rate = 1.0;
    d.decay_constant = 1.0;
    d.decay_remainder_exponent = shape;
    d.cdf_smoothness_beta = std::min(shape, 1.0);
    d.cdf_smoothness_l = (shape <= 1.0) ? 1.0 : weibull_density_max(shape);
    return d;
}

InnovationDist InnovationDist::power_uniform(double shape) {
    require_positive_shape(shape);
    InnovationDist d;
    d.kind = DistKind::PowerUniform;
    d.shape = shape;
    d.rate = 1.0;
    d.decay_constant = 1.0;
    // The power law is exact on the whole support.
    d.decay_remainder_exponent = std::numeric_limits<double>::infinity();
    d.cdf_smoothness_beta = std::min(shape, 1.0);
    d.cdf_smoothness_l = (shape <= 1.0) ? 1.0 : shape;
    return d;
}

InnovationDist InnovationDist::parse(std::string_view spec) {
    std::string s(spec);
    std::erase_if(s, [](unsigned char c) { return std::isspace(c); });
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    const auto open = s.find('(');
    if (open == std::string::npos || s.back() != ')') {
        throw config_error("cannot parse distribution spec '" + std::string(spec) +
                           "'; expected gamma(a,b), weibull(a) or poweruniform(a)");
    }
    const std::string name = s.substr(0, open);
    const std::string inner = s.substr(open + 1, s.size() - open - 2);
    if (name == "gamma") {
        const auto args = parse_args(inner, 2, spec);
        return gamma(args[0], args[1]);
    }
    if (name == "weibull") {
        const auto args = parse_args(inner, 1, spec);
        return weibull(args[0]);
    }
    if (name == "poweruniform") {
        const auto args = parse_args(inner, 1, spec);
        return power_uniform(args[0]);
    }
    throw config_error("unknown distribution '" + name + "' in spec '" + std::string(spec) + "'");
}

std::string InnovationDist::to_string() const {
    std::ostringstream os;
    switch (kind) {
        case DistKind::Gamma:
            os << "gamma(" << shape << "," << rate << ")";
            break;
        case DistKind::Weibull:
            os << "weibull(" << shape << ")";
            break;
        case DistKind::PowerUniform:
            os << "poweruniform(" << shape << ")";
            break;
    }
    return os.str();
}

double InnovationDist::sample(SeededRng& rng) const {
    switch (kind) {
        case DistKind::Gamma: {
            if (shape >= 1.0) {
                return gamma_rejection(shape, rng) / rate;
            }
            const double g = gamma_rejection(shape + 1.0, rng);
            const double u = rng.uniform01();
            return g * std::pow(u, 1.0 / shape) / rate;
        }
        case DistKind::Weibull:
        case DistKind::PowerUniform:
            return quantile(rng.uniform01());
    }
    throw std::logic_error("unreachable");
}

double InnovationDist::cdf(double y) const {
    if (y < 0.0) {
        throw std::domain_error("cdf: argument must be nonnegative");
    }
    switch (kind) {
        case DistKind::Gamma:
            return regularized_gamma_p(shape, rate * y);
        case DistKind::Weibull:
            return -std::expm1(-std::pow(y, shape));
        case DistKind::PowerUniform:
            return y >= 1.0 ? 1.0 : std::pow(y, shape);
    }
    throw std::logic_error("unreachable");
}

double InnovationDist::quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) {
        throw std::domain_error("quantile: argument must lie in [0,1]");
    }
    switch (kind) {
        case DistKind::Gamma:
            throw std::logic_error("quantile: no closed form for the gamma family");
        case DistKind::Weibull:
            return std::pow(-std::log1p(-u), 1.0 / shape);
        case DistKind::PowerUniform:
            return std::pow(u, 1.0 / shape);
    }
    throw std::logic_error("unreachable");
}

double InnovationDist::moment(double p) const {
    if (!(p > 0.0) || !std::isfinite(p)) {
        throw std::invalid_argument("moment: order must be a positive finite real");
    }
    switch (kind) {
        case DistKind::Gamma:
            return std::exp(std::lgamma(shape + p) - std::lgamma(shape) - p * std::log(rate));
        case DistKind::Weibull:
            return std::tgamma(1.0 + p / shape);
        case DistKind::PowerUniform:
            return shape / (shape + p);
    }
    throw std::logic_error("unreachable");
}

double InnovationDist::variance() const {
    const double m1 = moment(1.0);
    return moment(2.0) - m1 * m1;
}

}  // namespace tvar
