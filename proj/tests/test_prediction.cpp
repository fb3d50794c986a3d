#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "tvar/errors.hpp"
#include "tvar/numerics.hpp"
#include "tvar/prediction.hpp"
#include "tvar/process.hpp"
#include "tvar/rng.hpp"

using namespace tvar;

namespace {

std::vector<CurvePoint> constant_curve(std::size_t N, double value) {
    std::vector<CurvePoint> curve(N - 1);
    for (std::size_t k = 2; k <= N; ++k) {
        curve[k - 2].x = static_cast<double>(k) / static_cast<double>(N);
        curve[k - 2].f_hat = value;
        curve[k - 2].f_hat_truncated = value;
    }
    return curve;
}

std::vector<CurvePoint> truth_curve(const Path& p) {
    std::vector<CurvePoint> curve(p.N - 1);
    for (std::size_t k = 2; k <= p.N; ++k) {
        const double x = static_cast<double>(k) / static_cast<double>(p.N);
        curve[k - 2].x = x;
        curve[k - 2].f_hat = (*p.truth)(x);
        curve[k - 2].f_hat_truncated = curve[k - 2].f_hat;
    }
    return curve;
}

}  // namespace

TEST_CASE("plugin residuals") {
    const CoefficientFunction f = CoefficientFunction::sine_bump(0.4, 0.25);
    const Path p = simulate_path(f, InnovationDist::gamma(1.0, 1.0), 256, 77);

    SUBCASE("oracle plugin recovers the true innovations") {
        const std::vector<double> res = plugin_residuals(p, truth_curve(p));
        double worst = 0.0;
        for (std::size_t k = 2; k <= p.N; ++k) {
            worst = std::max(worst, std::abs(res[k - 2] - p.innovations[k - 1]) /
                                        p.innovations[k - 1]);
        }
        CHECK(worst <= 1e-12);
    }
    SUBCASE("zero plugin returns the states themselves") {
        const std::vector<double> res = plugin_residuals(p, constant_curve(p.N, 0.0));
        for (std::size_t k = 2; k <= p.N; ++k) {
            CHECK(res[k - 2] == p.x[k]);
        }
    }
    SUBCASE("grid mismatch is rejected") {
        std::vector<CurvePoint> bad = truth_curve(p);
        bad.pop_back();
        CHECK_THROWS_AS(plugin_residuals(p, bad), grid_mismatch_error);
        std::vector<CurvePoint> shifted = truth_curve(p);
        shifted[3].x += 1e-6;
        CHECK_THROWS_AS(plugin_residuals(p, shifted), grid_mismatch_error);
    }
}

TEST_CASE("one-step prediction") {
    const CoefficientFunction zero = CoefficientFunction::constant(0.0);
    const InnovationDist dist = InnovationDist::gamma(1.0, 1.0);
    const Path p = simulate_path(zero, dist, 128, 13);

    SUBCASE("zero plugin averages the states") {
        const PredictionResult pred = predict_next(p, constant_curve(p.N, 0.0));
        double mean_states = 0.0;
        for (std::size_t k = 2; k <= p.N; ++k) mean_states += p.x[k];
        mean_states /= static_cast<double>(p.N - 1);
        CHECK(pred.x_hat_next == doctest::Approx(mean_states).epsilon(1e-12));
    }
    SUBCASE("prediction is affine in each residual with weight 1/(N-1)") {
        const std::vector<CurvePoint> curve = truth_curve(p);
        const PredictionResult base = predict_next(p, curve);
        Path bumped = p;
        const std::size_t k_mod = 17;
        const double delta = 0.25;
        bumped.x[k_mod] += delta;  // perturbs eps_hat_{k_mod} only (k_mod < N)
        const PredictionResult moved = predict_next(bumped, curve);
        const double expected =
            base.x_hat_next + delta / static_cast<double>(p.N - 1) -
            (*p.truth)(static_cast<double>(k_mod + 1) / static_cast<double>(p.N)) * delta /
                static_cast<double>(p.N - 1);
        CHECK(moved.x_hat_next == doctest::Approx(expected).epsilon(1e-10));
    }
    SUBCASE("oracle mean squared error on the zero model") {
        // X_hat = mean(eps_2..eps_N); E (X_{N+1} - X_hat)^2 = Var eps (1 + 1/(N-1))
        const std::size_t N = 64;
        const std::size_t reps = 20000;
        std::vector<double> sq(reps);
        for (std::size_t r = 0; r < reps; ++r) {
            SeededRng rng(derive_seed(31415, r));
            const Path path = simulate_path_core(zero, dist, N, 0, rng);
            const double eps_next = dist.sample(rng);
            const double x_next = zero(1.0) * path.x[N] + eps_next;
            const PredictionResult pred = predict_next(path, truth_curve(path));
            sq[r] = (x_next - pred.x_hat_next) * (x_next - pred.x_hat_next);
        }
        const double mse = mean_of(sq);
        const double expected = dist.variance() * (1.0 + 1.0 / static_cast<double>(N - 1));
        CHECK(std::abs(mse - expected) <= 3.0 * stderr_of_mean(sq));
    }
}
