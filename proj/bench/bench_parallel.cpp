// Wall-clock comparison of the serial reference loops against the OpenMP
// kernels. Usage: bench_parallel [threads]
//
// Each kernel is run with threads = 1 (serial reference) and with the
// requested thread count; outputs are required to match exactly before a
// timing is reported.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "tvar/config.hpp"
#include "tvar/estimator.hpp"
#include "tvar/experiments.hpp"
#include "tvar/minimax.hpp"
#include "tvar/parallel.hpp"
#include "tvar/process.hpp"

using namespace tvar;

namespace {

double seconds(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
double timed(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return seconds(t0);
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %5.2fx   outputs %s\n",
                name, serial, parallel, serial / parallel,
                identical ? "identical" : "DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
    const int threads = argc > 1 ? std::atoi(argv[1]) : par::max_threads();
    std::printf("comparing serial reference vs OpenMP with %d threads\n\n", threads);

    {
        const Path p = simulate_path(CoefficientFunction::sine_bump(0.4, 0.25),
                                     InnovationDist::gamma(1.0, 1.0), 16384, 1);
        const RegressionSample s = regression_transform(p);
        std::vector<double> grid;
        for (int i = 0; i <= 400; ++i) grid.push_back(i / 400.0);
        std::vector<CurvePoint> c1, c2;
        const double t1 = timed([&] { c1 = estimate_curve(s, grid, 1.0, 2.0, {}, 1); });
        const double t2 = timed([&] { c2 = estimate_curve(s, grid, 1.0, 2.0, {}, threads); });
        bool same = c1.size() == c2.size();
        for (std::size_t i = 0; same && i < c1.size(); ++i) {
            same = c1[i].f_hat == c2[i].f_hat;
        }
        report("curve estimation (d=1)", t1, t2, same);
    }

    {
        KeyValueConfig cfg = KeyValueConfig::parse_string(
            "n = 512,1024,2048,4096\nreps = 100\nseed = 2\nthreads = 1\n");
        Report r1, r2;
        const double t1 = timed([&] { r1 = studies::rate_study(cfg); });
        cfg.set("threads", std::to_string(threads));
        const double t2 = timed([&] { r2 = studies::rate_study(cfg); });
        report("rate study", t1, t2, r1.table.to_csv() == r2.table.to_csv());
    }

    {
        const lab::HypothesisPair hp = lab::HypothesisPair::make(4096, 1.0, 1.0, 1.0, 16.0);
        lab::RiskReport r1, r2;
        const double t1 = timed([&] { r1 = lab::test_risk(hp, 20000, 3, 1); });
        const double t2 = timed([&] { r2 = lab::test_risk(hp, 20000, 3, threads); });
        report("likelihood-ratio test risk", t1, t2,
               r1.risk == r2.risk && r1.np_functional == r2.np_functional);
    }

    return 0;
}
