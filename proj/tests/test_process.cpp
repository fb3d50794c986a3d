#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <vector>

#include "tvar/coefficient.hpp"
#include "tvar/errors.hpp"
#include "tvar/numerics.hpp"
#include "tvar/process.hpp"

using namespace tvar;

TEST_CASE("coefficient functions") {
    SUBCASE("parsing and labels") {
        CHECK(CoefficientFunction::parse("const(0.5)")(0.3) == 0.5);
        const CoefficientFunction f = CoefficientFunction::parse("Sine(0.4, 0.25)");
        CHECK(f(0.25) == doctest::Approx(0.65));
        CHECK(f.rho == doctest::Approx(0.65));
        CHECK_THROWS_AS(CoefficientFunction::parse("const(1.0)"), config_error);
        CHECK_THROWS_AS(CoefficientFunction::parse("step(0.5)"), config_error);
        CHECK_THROWS_AS(CoefficientFunction::parse("ramp(0.1,0.2,0.7,0.3)"), config_error);
    }
    SUBCASE("domain extension clamps to the boundary values") {
        const CoefficientFunction f = CoefficientFunction::affine(0.2, 0.3);
        CHECK(f(-5.0) == doctest::Approx(0.2));
        CHECK(f(7.0) == doctest::Approx(0.5));
    }
    SUBCASE("range and smoothness metadata on a dense grid") {
        for (const auto& f :
             {CoefficientFunction::constant(0.0), CoefficientFunction::affine(0.1, 0.5),
              CoefficientFunction::sine_bump(0.4, 0.25),
              CoefficientFunction::ramp(0.1, 0.7, 0.25, 0.75)}) {
            double max_v = 0.0;
            for (int i = 0; i <= 1000; ++i) {
                const double v = f(i / 1000.0);
                CHECK(v >= 0.0);
                CHECK(v <= f.rho + 1e-12);
                max_v = std::max(max_v, v);
            }
            CHECK(f.rho - max_v <= 1e-5);
            CHECK(f.rho < 1.0);
        }
    }
    SUBCASE("Lipschitz bound holds on grid pairs for the unit-exponent curves") {
        for (const auto& f :
             {CoefficientFunction::affine(0.1, 0.5), CoefficientFunction::sine_bump(0.4, 0.25),
              CoefficientFunction::ramp(0.1, 0.7, 0.25, 0.75)}) {
            REQUIRE(f.holder_exponent == 1.0);
            for (int i = 0; i <= 100; ++i) {
                for (int j = i + 1; j <= 100; ++j) {
                    const double y = i / 100.0, z = j / 100.0;
                    CHECK(std::abs(f(y) - f(z)) <= f.holder_constant * std::abs(y - z) + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("simulated paths") {
    const InnovationDist gamma11 = InnovationDist::gamma(1.0, 1.0);

    SUBCASE("zero coefficient degenerates to the innovations") {
        const Path p = simulate_path(CoefficientFunction::constant(0.0), gamma11, 100, 3);
        for (std::size_t k = 1; k <= p.N; ++k) {
            CHECK(p.x[k] == p.innovations[k - 1]);
        }
    }
    SUBCASE("identical inputs give bitwise-identical paths") {
        const CoefficientFunction f = CoefficientFunction::sine_bump(0.4, 0.25);
        const Path p1 = simulate_path(f, gamma11, 500, 99);
        const Path p2 = simulate_path(f, gamma11, 500, 99);
        CHECK(p1.x == p2.x);
        CHECK(p1.innovations == p2.innovations);
        CHECK(p1.prehistory == p2.prehistory);
    }
    SUBCASE("long-run mean of the constant-coefficient chain") {
        const Path p = simulate_path(CoefficientFunction::constant(0.5), gamma11, 100000, 17);
        const double m = mean_of(std::span<const double>(p.x.data() + 1, p.N));
        // stationary mean E eps / (1 - rho) = 2, Monte Carlo tolerance
        CHECK(m == doctest::Approx(2.0).epsilon(0.025));
    }
    SUBCASE("reconstruction identity and positivity") {
        const CoefficientFunction f = CoefficientFunction::ramp(0.1, 0.7, 0.25, 0.75);
        const Path p = simulate_path(f, InnovationDist::weibull(1.5), 2000, 11);
        double worst = 0.0;
        for (std::size_t k = 1; k <= p.N; ++k) {
            CHECK(p.x[k] > 0.0);
            const double recon =
                f(static_cast<double>(k) / static_cast<double>(p.N)) * p.x[k - 1] +
                p.innovations[k - 1];
            worst = std::max(worst, std::abs(p.x[k] - recon) / p.x[k]);
        }
        CHECK(worst <= 1e-12);
    }
    SUBCASE("stationary-moment sanity within five standard errors") {
        const Path p = simulate_path(CoefficientFunction::constant(0.5),
                                     InnovationDist::gamma(2.0, 1.0), 50000, 23);
        const std::span<const double> xs(p.x.data() + 1, p.N);
        // autocorrelated sample; inflate the iid standard error by the
        // AR(1) factor sqrt((1+rho)/(1-rho))
        const double se = stderr_of_mean(xs) * std::sqrt(3.0);
        CHECK(std::abs(mean_of(xs) - 4.0) <= 5.0 * se);
    }
}

TEST_CASE("regression transform") {
    SUBCASE("direct ratios") {
        Path p;
        p.N = 2;
        p.x = {1.0, 2.0, 1.0};
        p.innovations = {0.0, 0.0};
        p.has_innovations = true;
        const RegressionSample s = regression_transform(p);
        CHECK(s.y[0] == doctest::Approx(2.0));
        CHECK(s.y[1] == doctest::Approx(0.5));
        CHECK(s.t[0] == doctest::Approx(0.5));
        CHECK(s.t[1] == doctest::Approx(1.0));
    }
    SUBCASE("zero coefficient gives innovation ratios") {
        const Path p = simulate_path(CoefficientFunction::constant(0.0),
                                     InnovationDist::gamma(1.0, 1.0), 50, 5);
        const RegressionSample s = regression_transform(p);
        CHECK(s.y[0] == doctest::Approx(p.innovations[0] / p.x[0]));
        for (std::size_t k = 2; k <= p.N; ++k) {
            CHECK(s.y[k - 1] == doctest::Approx(p.innovations[k - 1] / p.innovations[k - 2]));
        }
    }
    SUBCASE("one-sided residuals above the truth") {
        const CoefficientFunction f = CoefficientFunction::sine_bump(0.4, 0.25);
        const Path p = simulate_path(f, InnovationDist::gamma(1.0, 1.0), 1000, 7);
        const RegressionSample s = regression_transform(p);
        for (std::size_t k = 1; k <= p.N; ++k) {
            CHECK(s.y[k - 1] >= f(s.t[k - 1]));
        }
    }
    SUBCASE("nonpositive state is a degenerate path") {
        Path p;
        p.N = 2;
        p.x = {1.0, 0.0, 1.0};
        p.innovations = {0.0, 0.0};
        CHECK_THROWS_AS(regression_transform(p), degenerate_path_error);
    }
}

TEST_CASE("window indices") {
    SUBCASE("interior band") {
        const Window w = window_indices(100, 0.5, 0.1);
        CHECK(w.lo == 40);
        CHECK(w.hi == 60);
        CHECK(w.size() == 21);
    }
    SUBCASE("boundary clipping") {
        const Window w = window_indices(100, 0.0, 0.05);
        CHECK(w.lo == 1);
        CHECK(w.hi == 5);
        CHECK(w.size() == 5);
    }
    SUBCASE("no design point in the band") {
        CHECK_THROWS_AS(window_indices(10, 0.55, 0.01), empty_window_error);
    }
    SUBCASE("design point exactly at x") {
        const Window w = window_indices(10, 0.5, 0.01);
        CHECK(w.lo == 5);
        CHECK(w.hi == 5);
    }
}

TEST_CASE("modified innovations") {
    SUBCASE("zero coefficient gives eps ratios") {
        const Path p = simulate_path(CoefficientFunction::constant(0.0),
                                     InnovationDist::gamma(1.0, 1.0), 50, 5);
        const std::vector<double> em = modified_innovations(p);
        for (std::size_t k = 2; k <= p.N; ++k) {
            CHECK(em[k - 1] == doctest::Approx(p.innovations[k - 1] / p.innovations[k - 2]));
        }
    }
    SUBCASE("degenerate zero innovation maps to zero") {
        Path p;
        p.N = 2;
        p.x = {1.0, 1.0, 1.0};
        p.innovations = {0.0, 1.0};
        p.has_innovations = true;
        const std::vector<double> em = modified_innovations(p);
        CHECK(em[0] == 0.0);
    }
    SUBCASE("missing innovations raise a diagnostics error") {
        Path p;
        p.N = 2;
        p.x = {1.0, 1.0, 1.0};
        p.has_innovations = false;
        CHECK_THROWS_AS(modified_innovations(p), diagnostics_error);
    }
    SUBCASE("normalized CDF of the modified innovations is two-sided bounded") {
        const Path p = simulate_path(CoefficientFunction::constant(0.5),
                                     InnovationDist::gamma(1.0, 1.0), 100000, 77);
        std::vector<double> em = modified_innovations(p);
        std::sort(em.begin(), em.end());
        for (double y : {1e-3, 1e-2, 1e-1}) {
            const auto it = std::upper_bound(em.begin(), em.end(), y);
            const double cdf_hat =
                static_cast<double>(it - em.begin()) / static_cast<double>(em.size());
            const double ratio = cdf_hat / y;  // shape a = 1
            CHECK(ratio > 0.05);
            CHECK(ratio < 20.0);
        }
    }
}

TEST_CASE("tail split diagnostics") {
    SUBCASE("zero coefficient kills every term") {
        const Path p = simulate_path(CoefficientFunction::constant(0.0),
                                     InnovationDist::gamma(1.0, 1.0), 200, 3);
        CHECK(tail_split_norm(p, 5) == 0.0);
    }
    SUBCASE("lag zero reproduces X_k - eps_k on average") {
        const Path p = simulate_path(CoefficientFunction::constant(0.5),
                                     InnovationDist::gamma(1.0, 1.0), 500, 9);
        double expect = 0.0;
        for (std::size_t k = 1; k <= p.N; ++k) expect += p.x[k] - p.innovations[k - 1];
        expect /= static_cast<double>(p.N);
        CHECK(tail_split_norm(p, 0) == doctest::Approx(expect).epsilon(1e-10));
    }
    SUBCASE("geometric bound for the constant-coefficient chain") {
        const double rho = 0.5;
        const Path p = simulate_path(CoefficientFunction::constant(rho),
                                     InnovationDist::gamma(1.0, 1.0), 20000, 31);
        for (std::size_t lag : {std::size_t{5}, std::size_t{10}, std::size_t{20}}) {
            const double value = tail_split_norm(p, lag);
            const double bound = std::pow(rho, static_cast<double>(lag + 1)) / (1.0 - rho);
            CHECK(value > 0.0);
            CHECK(value <= bound * 1.35);
            CHECK(value >= bound * 0.65);
        }
    }
    SUBCASE("log value decays affinely in the lag") {
        const double rho = 0.5;
        const Path p = simulate_path(CoefficientFunction::constant(rho),
                                     InnovationDist::gamma(1.0, 1.0), 20000, 57);
        std::vector<double> lags, logs;
        for (std::size_t lag = 5; lag <= 40; lag += 5) {
            lags.push_back(static_cast<double>(lag));
            logs.push_back(std::log(tail_split_norm(p, lag)));
        }
        const LineFit fit = fit_line(lags, logs);
        REQUIRE(!fit.degenerate);
        CHECK(fit.slope <= std::log(rho) + 0.05);
        CHECK(fit.r2 > 0.99);
    }
    SUBCASE("lag beyond the retained pre-history is an error") {
        const Path p = simulate_path(CoefficientFunction::constant(0.5),
                                     InnovationDist::gamma(1.0, 1.0), 100, 3);
        CHECK_THROWS_AS(tail_split_norm(p, p.prehistory.size()), diagnostics_error);
    }
}

TEST_CASE("path CSV round trip") {
    const CoefficientFunction f = CoefficientFunction::sine_bump(0.4, 0.25);
    const Path p = simulate_path(f, InnovationDist::gamma(1.0, 1.0), 64, 2024);
    std::ostringstream os;
    write_path_csv(p, os);
    const std::string text = os.str();
    CHECK(text.rfind("k,t,X,eps\n", 0) == 0);

    std::istringstream is(text);
    const Path q = read_path_csv(is);
    CHECK(q.N == p.N);
    CHECK(q.x == p.x);
    CHECK(q.innovations == p.innovations);

    std::istringstream bad("x,y\n0,0\n");
    CHECK_THROWS_AS(read_path_csv(bad), config_error);
}
