#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "tvar/distributions.hpp"
#include "tvar/errors.hpp"
#include "tvar/numerics.hpp"
#include "tvar/rng.hpp"

using namespace tvar;

TEST_CASE("sampling is deterministic for a fixed seed") {
    const InnovationDist d = InnovationDist::gamma(1.0, 1.0);
    SeededRng r1(42), r2(42);
    const double x1 = d.sample(r1);
    const double x2 = d.sample(r2);
    CHECK(x1 == x2);
    CHECK(x1 > 0.0);
}

TEST_CASE("weibull draw through the inverse CDF") {
    const InnovationDist d = InnovationDist::weibull(2.0);
    // u = 1 - e^{-1}  =>  x = (-log(1-u))^{1/2} = 1
    const double u = 1.0 - std::exp(-1.0);
    CHECK(d.quantile(u) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gamma(2,1) mean over a million draws") {
    const InnovationDist d = InnovationDist::gamma(2.0, 1.0);
    SeededRng rng(1234);
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) sum += d.sample(rng);
    CHECK(sum / n == doctest::Approx(2.0).epsilon(0.005));
}

TEST_CASE("cdf values") {
    SUBCASE("exponential closed form") {
        const InnovationDist d = InnovationDist::gamma(1.0, 1.0);
        CHECK(d.cdf(0.1) == doctest::Approx(1.0 - std::exp(-0.1)).epsilon(1e-12));
    }
    SUBCASE("zero at the left endpoint") {
        for (const auto& d : {InnovationDist::gamma(1.7, 2.0), InnovationDist::weibull(0.8),
                              InnovationDist::power_uniform(1.5)}) {
            CHECK(d.cdf(0.0) == 0.0);
        }
    }
    SUBCASE("gamma(2,1) near the origin against quadrature") {
        const InnovationDist d = InnovationDist::gamma(2.0, 1.0);
        const double quad = oracles::gamma_cdf_quadrature(2.0, 1.0, 0.01);
        const double closed = 1.0 - (1.0 + 0.01) * std::exp(-0.01);
        CHECK(quad == doctest::Approx(closed).epsilon(1e-9));
        CHECK(d.cdf(0.01) == doctest::Approx(quad).epsilon(1e-9));
        // leading coefficient of y^2
        CHECK(d.cdf(1e-4) / 1e-8 == doctest::Approx(0.5).epsilon(1e-3));
    }
    SUBCASE("negative argument is a domain error") {
        CHECK_THROWS_AS(InnovationDist::weibull(1.0).cdf(-0.1), std::domain_error);
    }
    SUBCASE("non-integer gamma shape against quadrature") {
        const InnovationDist d = InnovationDist::gamma(0.7, 1.3);
        for (double y : {0.05, 0.4, 1.7, 6.0}) {
            CHECK(d.cdf(y) == doctest::Approx(oracles::gamma_cdf_quadrature(0.7, 1.3, y))
                                  .epsilon(1e-10));
        }
    }
}

TEST_CASE("decay triples at the origin") {
    SUBCASE("gamma constant = rate^shape / Gamma(shape+1), checked by quadrature") {
        for (const auto& [shape, rate] : std::vector<std::pair<double, double>>{
                 {1.0, 1.0}, {2.0, 1.0}, {0.5, 1.0}, {1.5, 2.0}}) {
            const InnovationDist d = InnovationDist::gamma(shape, rate);
            const auto decay = d.origin_decay();
            CHECK(decay.constant ==
                  doctest::Approx(std::pow(rate, shape) / std::tgamma(shape + 1.0))
                      .epsilon(1e-12));
            for (double y : {1e-3, 1e-4}) {
                const double reference = oracles::gamma_cdf_quadrature(shape, rate, y);
                CHECK(decay.constant * std::pow(y, shape) ==
                      doctest::Approx(reference).epsilon(5e-3));
            }
        }
    }
    SUBCASE("weibull is exactly unit-constant with remainder exponent = shape") {
        const auto decay = InnovationDist::weibull(1.3).origin_decay();
        CHECK(decay.constant == 1.0);
        CHECK(decay.remainder_exponent == doctest::Approx(1.3));
    }
    SUBCASE("power law is exact") {
        const InnovationDist d = InnovationDist::power_uniform(0.8);
        const auto decay = d.origin_decay();
        CHECK(decay.constant == 1.0);
        for (double y : {0.9, 0.5, 1e-3}) {
            CHECK(d.cdf(y) == doctest::Approx(std::pow(y, 0.8)).epsilon(1e-15));
        }
    }
}

TEST_CASE("analytic moments") {
    CHECK(InnovationDist::gamma(2.0, 4.0).moment(1.0) == doctest::Approx(0.5));
    CHECK(InnovationDist::gamma(2.0, 1.0).moment(2.0) == doctest::Approx(6.0));
    CHECK(InnovationDist::weibull(2.0).moment(2.0) == doctest::Approx(1.0));
    CHECK(InnovationDist::power_uniform(2.0).moment(1.0) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(InnovationDist::gamma(1.0, 1.0).moment(0.0), std::invalid_argument);
    CHECK_THROWS_AS(InnovationDist::gamma(1.0, 1.0).moment(-1.0), std::invalid_argument);
}

TEST_CASE("moments match Monte Carlo within three standard errors") {
    const std::size_t n = 1000000;
    std::size_t case_id = 0;
    for (const auto& d : {InnovationDist::gamma(2.0, 1.0), InnovationDist::weibull(2.0),
                          InnovationDist::power_uniform(1.5)}) {
        for (double p : {1.0, 2.0}) {
            SeededRng rng(900 + case_id++);
            std::vector<double> xp(n);
            for (std::size_t i = 0; i < n; ++i) xp[i] = std::pow(d.sample(rng), p);
            const double mc = mean_of(xp);
            const double se = stderr_of_mean(xp);
            CHECK(std::abs(mc - d.moment(p)) <= 3.0 * se);
        }
    }
}

TEST_CASE("empirical CDF of seeded draws stays close to cdf()") {
    std::size_t case_id = 0;
    for (const auto& d : {InnovationDist::gamma(1.0, 1.0), InnovationDist::gamma(0.5, 2.0),
                          InnovationDist::weibull(0.7), InnovationDist::power_uniform(2.0)}) {
        SeededRng rng(5000 + case_id++);
        std::vector<double> sample(10000);
        for (double& v : sample) v = d.sample(rng);
        const double ks = ks_distance(sample, [&](double y) { return d.cdf(y); });
        CHECK(ks <= 0.02);
    }
}

TEST_CASE("origin decay ratio is controlled by the remainder exponent") {
    for (const auto& d : {InnovationDist::gamma(1.0, 1.0), InnovationDist::gamma(2.0, 1.0),
                          InnovationDist::weibull(0.8), InnovationDist::power_uniform(1.2)}) {
        const auto decay = d.origin_decay();
        double c_fitted = 0.0;
        for (double y : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
            const double ratio = d.cdf(y) / (decay.constant * std::pow(y, decay.shape));
            const double bound = std::isinf(decay.remainder_exponent)
                                     ? 0.0
                                     : std::pow(y, decay.remainder_exponent);
            if (bound == 0.0) {
                CHECK(std::abs(ratio - 1.0) <= 1e-12);
            } else {
                c_fitted = std::max(c_fitted, std::abs(ratio - 1.0) / bound);
            }
        }
        CHECK(c_fitted < 50.0);
    }
}

TEST_CASE("finite-moment range of the model assumption holds for shipped families") {
    // p* = max(1, 2a + 0.1) must be finite for every shipped family.
    for (const auto& d : {InnovationDist::gamma(0.5, 1.0), InnovationDist::gamma(2.0, 1.0),
                          InnovationDist::weibull(1.5), InnovationDist::power_uniform(0.9)}) {
        const double p_star = std::max(1.0, 2.0 * d.shape + 0.1);
        CHECK(std::isfinite(d.moment(p_star)));
    }
}

TEST_CASE("spec string parsing") {
    const InnovationDist d = InnovationDist::parse(" Gamma( 2 , 0.5 ) ");
    CHECK(d.kind == DistKind::Gamma);
    CHECK(d.shape == 2.0);
    CHECK(d.rate == 0.5);
    CHECK(InnovationDist::parse("WEIBULL(1.5)").kind == DistKind::Weibull);
    CHECK(InnovationDist::parse("poweruniform(2)").kind == DistKind::PowerUniform);
    CHECK_THROWS_AS(InnovationDist::parse("gamma(2)"), config_error);
    CHECK_THROWS_AS(InnovationDist::parse("cauchy(1)"), config_error);
    CHECK_THROWS_AS(InnovationDist::parse("gamma(-1,1)"), config_error);
}
