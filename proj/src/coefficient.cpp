#include "tvar/coefficient.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "tvar/errors.hpp"

namespace tvar {

namespace {

void validate_range(double lo, double hi, std::string_view label) {
    if (lo < 0.0 || hi >= 1.0) {
        std::ostringstream os;
        os << "coefficient function '" << label << "' must map [0,1] into [0,1): range ["
           << lo << ", " << hi << "]";
        throw config_error(os.str());
    }
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
            throw config_error("bad numeric argument in coefficient spec '" + std::string(spec) + "'");
        }
    }
    if (out.size() != expected) {
        throw config_error("coefficient spec '" + std::string(spec) + "' expects " +
                           std::to_string(expected) + " argument(s)");
    }
    return out;
}

std::string format_label(std::string_view name, std::initializer_list<double> args) {
    std::ostringstream os;
    os << name << "(";
    bool first = true;
    for (double a : args) {
        if (!first) os << ",";
        os << a;
        first = false;
    }
    os << ")";
    return os.str();
}

}  // namespace

CoefficientFunction CoefficientFunction::constant(double c) {
    const std::string label = format_label("const", {c});
    validate_range(c, c, label);
    CoefficientFunction f;
    f.fn = [c](double) { return c; };
    f.holder_constant = 0.0;
    f.holder_exponent = 2.0;  // constant curves sit in every class
    f.rho = c;
    f.label = label;
    return f;
}

CoefficientFunction CoefficientFunction::affine(double a, double b) {
    const std::string label = format_label("affine", {a, b});
    validate_range(std::min(a, a + b), std::max(a, a + b), label);
    CoefficientFunction f;
    f.fn = [a, b](double u) { return a + b * u; };
    f.holder_constant = std::abs(b);
    f.holder_exponent = 1.0;
    f.rho = std::max(a, a + b);
    f.label = label;
    return f;
}

CoefficientFunction CoefficientFunction::sine_bump(double c0, double c1) {
    const std::string label = format_label("sine", {c0, c1});
    validate_range(c0 - std::abs(c1), c0 + std::abs(c1), label);
    CoefficientFunction f;
    f.fn = [c0, c1](double u) { return c0 + c1 * std::sin(2.0 * std::numbers::pi * u); };
    f.holder_constant = 2.0 * std::numbers::pi * std::abs(c1);
    f.holder_exponent = 1.0;
    f.rho = c0 + std::abs(c1);
    f.label = label;
    return f;
}

CoefficientFunction CoefficientFunction::ramp(double c0, double c1, double t0, double t1) {
    const std::string label = format_label("ramp", {c0, c1, t0, t1});
    if (!(0.0 <= t0 && t0 < t1 && t1 <= 1.0)) {
        throw config_error("ramp breakpoints must satisfy 0 <= t0 < t1 <= 1 in '" + label + "'");
    }
    validate_range(std::min(c0, c1), std::max(c0, c1), label);
    CoefficientFunction f;
    f.fn = [c0, c1, t0, t1](double u) {
        if (u <= t0) return c0;
        if (u >= t1) return c1;
        return c0 + (c1 - c0) * (u - t0) / (t1 - t0);
    };
    f.holder_constant = std::abs(c1 - c0) / (t1 - t0);
    f.holder_exponent = 1.0;
    f.rho = std::max(c0, c1);
    f.label = label;
    return f;
}

CoefficientFunction CoefficientFunction::parse(std::string_view spec) {
    std::string s(spec);
    std::erase_if(s, [](unsigned char c) { return std::isspace(c); });
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    const auto open = s.find('(');
    if (open == std::string::npos || s.empty() || s.back() != ')') {
        throw config_error("cannot parse coefficient spec '" + std::string(spec) +
                           "'; expected const(c), affine(a,b), sine(c0,c1) or ramp(c0,c1,t0,t1)");
    }
    const std::string name = s.substr(0, open);
    const std::string inner = s.substr(open + 1, s.size() - open - 2);
    if (name == "const") {
        const auto a = parse_args(inner, 1, spec);
        return constant(a[0]);
    }
    if (name == "affine") {
        const auto a = parse_args(inner, 2, spec);
        return affine(a[0], a[1]);
    }
    if (name == "sine") {
        const auto a = parse_args(inner, 2, spec);
        return sine_bump(a[0], a[1]);
    }
    if (name == "ramp") {
        const auto a = parse_args(inner, 4, spec);
        return ramp(a[0], a[1], a[2], a[3]);
    }
    throw config_error("unknown coefficient function '" + name + "' in spec '" +
                       std::string(spec) + "'");
}

}  // namespace tvar
