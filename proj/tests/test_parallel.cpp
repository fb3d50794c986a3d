#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "tvar/config.hpp"
#include "tvar/experiments.hpp"
#include "tvar/minimax.hpp"
#include "tvar/parallel.hpp"
#include "tvar/process.hpp"
#include "tvar/report.hpp"
#include "tvar/estimator.hpp"

using namespace tvar;

TEST_CASE("slot-indexed loop fills every slot once") {
    for (int threads : {1, 4}) {
        std::vector<int> hits(1000, 0);
        par::for_each_index(hits.size(), threads, [&](std::size_t i) { hits[i] += 1; });
        for (int h : hits) CHECK(h == 1);
    }
}

TEST_CASE("exceptions surface with the lowest failing index") {
    for (int threads : {1, 4}) {
        try {
            par::for_each_index(100, threads, [&](std::size_t i) {
                if (i == 17 || i == 63) {
                    throw std::runtime_error("boom " + std::to_string(i));
                }
            });
            FAIL("expected an exception");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()) == "boom 17");
        }
    }
}

TEST_CASE("curve estimation is identical serial and parallel") {
    const Path p = simulate_path(CoefficientFunction::sine_bump(0.4, 0.25),
                                 InnovationDist::gamma(1.0, 1.0), 2048, 5);
    const RegressionSample s = regression_transform(p);
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(i / 40.0);

    const auto serial = estimate_curve(s, grid, 1.0, 2.0, std::nullopt, 1);
    const auto parallel = estimate_curve(s, grid, 1.0, 2.0, std::nullopt, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].f_hat == parallel[i].f_hat);  // bitwise
        CHECK(serial[i].f_hat_truncated == parallel[i].f_hat_truncated);
        CHECK(serial[i].n_local == parallel[i].n_local);
    }
}

TEST_CASE("lab replications are identical serial and parallel") {
    const lab::HypothesisPair hp = lab::HypothesisPair::make(256, 1.0, 1.0, 1.0, 16.0);
    const lab::RiskReport serial = lab::test_risk(hp, 2000, 9, 1);
    const lab::RiskReport parallel = lab::test_risk(hp, 2000, 9, 4);
    CHECK(serial.risk == parallel.risk);
    CHECK(serial.np_functional == parallel.np_functional);

    CHECK(lab::indicator_check(hp, 2000, 3, 1) == lab::indicator_check(hp, 2000, 3, 4));
    CHECK(lab::truncation_check(hp, 500, 4, 1) == lab::truncation_check(hp, 500, 4, 4));
}

TEST_CASE("study tables are byte-identical across thread counts") {
    KeyValueConfig cfg = KeyValueConfig::parse_string(
        "n = 64,128,256,512\n"
        "reps = 8\n"
        "seed = 77\n"
        "threads = 1\n");
    const Report serial = studies::rate_study(cfg);
    cfg.set("threads", "4");
    const Report parallel = studies::rate_study(cfg);
    CHECK(serial.table.to_csv() == parallel.table.to_csv());
    // summaries agree except for the echoed thread count
    CHECK(serial.summary == parallel.summary);
}
