#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace tvar {

// Autoregression coefficient curve on [0, 1] with values in [0, rho],
// rho < 1. Outside the unit interval the curve continues with its boundary
// values: f(u) = f(0) for u < 0 and f(u) = f(1) for u > 1.
//
// holder_constant / holder_exponent describe the smoothness class the curve
// belongs to (|f^(m)(y) - f^(m)(z)| <= L |y - z|^(beta - m) with m the
// largest integer below beta).
struct CoefficientFunction {
    std::function<double(double)> fn;  // defined on [0, 1]
    double holder_constant = 0.0;
    double holder_exponent = 1.0;
    double rho = 0.0;  // max of f on [0, 1]
    std::string label;

    double operator()(double u) const {
        if (u < 0.0) u = 0.0;
        if (u > 1.0) u = 1.0;
        return fn(u);
    }

    static CoefficientFunction constant(double c);
    static CoefficientFunction affine(double a, double b);          // a + b u
    static CoefficientFunction sine_bump(double c0, double c1);     // c0 + c1 sin(2 pi u)
    // c0 on [0, t0], linear to c1 on [t0, t1], c1 on [t1, 1].
    static CoefficientFunction ramp(double c0, double c1, double t0, double t1);

    // Parses "const(c)", "affine(a,b)", "sine(c0,c1)", "ramp(c0,c1,t0,t1)".
    static CoefficientFunction parse(std::string_view spec);
    std::string to_string() const { return label; }
};

}  // namespace tvar
