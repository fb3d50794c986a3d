#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "tvar/config.hpp"
#include "tvar/errors.hpp"
#include "tvar/experiments.hpp"
#include "tvar/numerics.hpp"
#include "tvar/report.hpp"

using namespace tvar;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("config parsing") {
    const KeyValueConfig cfg = KeyValueConfig::parse_string(
        "# comment\n"
        "N = 512, 1024\n"
        "[fit]\n"
        "Beta = 2.0\n"
        "h = 1e-2\n");
    CHECK(cfg.get_size_list("n") == std::vector<std::size_t>{512, 1024});
    CHECK(cfg.get_double("fit.beta") == 2.0);
    CHECK(cfg.get_double("fit.h") == 0.01);
    CHECK_THROWS_AS(cfg.get_string("missing"), config_error);
    CHECK_THROWS_AS(cfg.get_double("n"), config_error);
    CHECK_THROWS_AS(KeyValueConfig::parse_string("novalue\n"), config_error);
}

TEST_CASE("line fit degenerate reporting") {
    const std::vector<double> xs{1.0, 1.0, 1.0};
    const std::vector<double> ys{2.0, 3.0, 4.0};
    CHECK(fit_line(xs, ys).degenerate);
    CHECK(fit_line(std::vector<double>{1.0}, std::vector<double>{2.0}).degenerate);
}

TEST_CASE("rate study structure and reproducibility") {
    const KeyValueConfig cfg = KeyValueConfig::parse_string(
        "n = 64,128,256,512\n"
        "reps = 16\n"
        "seed = 11\n");
    const Report r1 = studies::rate_study(cfg);
    CHECK(r1.kind == "rate-study");
    CHECK(r1.table.columns.front() == "N");
    CHECK(r1.table.rows.size() == 4);
    CHECK(r1.summary.contains("fit_qmle"));
    CHECK(r1.summary["theory_slope_qmle"] == doctest::Approx(-0.5));
    CHECK(!r1.summary["fit_qmle"]["degenerate"].get<bool>());

    const Report r2 = studies::rate_study(cfg);
    CHECK(r1.table.to_csv() == r2.table.to_csv());
    CHECK(r1.summary == r2.summary);

    SUBCASE("span preconditions are enforced") {
        CHECK_THROWS_AS(
            studies::rate_study(KeyValueConfig::parse_string("n = 64,65,66,67\nreps=4\n")),
            config_error);
        CHECK_THROWS_AS(
            studies::rate_study(KeyValueConfig::parse_string("n = 64,128\nreps=4\n")),
            config_error);
        CHECK_THROWS_AS(
            studies::rate_study(KeyValueConfig::parse_string("n = 4,64,128,256\nreps=4\n")),
            config_error);
    }
}

TEST_CASE("rate study with the baseline comparison") {
    const KeyValueConfig cfg = KeyValueConfig::parse_string(
        "n = 128,256,512,1024\n"
        "reps = 12\n"
        "estimator = both\n"
        "seed = 3\n");
    const Report r = studies::rate_study(cfg);
    bool found = false;
    for (const auto& col : r.table.columns) {
        if (col == "mean_abs_err_baseline") found = true;
    }
    CHECK(found);
    CHECK(r.summary.contains("fit_baseline"));
    CHECK(r.summary["theory_slope_baseline"] == doctest::Approx(-1.0 / 3.0));

    SUBCASE("baseline-only tables carry only baseline columns") {
        KeyValueConfig solo = cfg;
        solo.set("estimator", "baseline");
        const Report rb = studies::rate_study(solo);
        CHECK(rb.table.columns ==
              std::vector<std::string>{"N", "h_baseline", "mean_abs_err_baseline",
                                       "se_mean_baseline"});
        CHECK(!rb.summary.contains("fit_qmle"));
    }
    SUBCASE("unknown estimator kind is rejected") {
        KeyValueConfig bad = cfg;
        bad.set("estimator", "ridge");
        CHECK_THROWS_AS(studies::rate_study(bad), config_error);
    }
}

TEST_CASE("concentration study calibrates and fits") {
    const KeyValueConfig cfg = KeyValueConfig::parse_string(
        "n = 1024\n"
        "reps = 2000\n"
        "pilot_reps = 400\n"
        "seed = 19\n");
    const Report r = studies::concentration_study(cfg);
    CHECK(r.kind == "concentration");
    // sanity row v = 0 plus the grid rows
    CHECK(r.table.rows.size() == 11);
    CHECK(r.summary["c1_hat"].get<double>() > 0.0);
    CHECK(r.summary["c2_hat"].get<double>() > 0.0);
    const auto& fit = r.summary["fit_log_freq_vs_v_pow_a"];
    REQUIRE(!fit["degenerate"].get<bool>());
    CHECK(fit["slope"].get<double>() < 0.0);
    CHECK(fit["r2"].get<double>() >= 0.8);

    SUBCASE("v grid beyond the precondition cap is rejected") {
        KeyValueConfig bad = cfg;
        bad.set("v_max", "1000");
        CHECK_THROWS_AS(studies::concentration_study(bad), config_error);
    }
}

TEST_CASE("prediction study oracle control") {
    const KeyValueConfig cfg = KeyValueConfig::parse_string(
        "f = const(0.0)\n"
        "n = 64,128,256,512\n"
        "reps = 4000\n"
        "oracle = true\n"
        "seed = 29\n");
    const Report r = studies::prediction_study(cfg);
    CHECK(r.table.columns == std::vector<std::string>{"N", "mse_hat", "var_eps", "abs_gap"});
    const auto& gap_se = r.summary["gap_se"];
    const auto& theory = r.summary["oracle_gap_theory"];
    for (std::size_t i = 0; i < r.table.rows.size(); ++i) {
        const double gap = std::get<double>(r.table.rows[i][3]);
        CHECK(std::abs(gap - theory[i].get<double>()) <= 3.0 * gap_se[i].get<double>());
    }
    const auto& fit = r.summary["fit_log_gap_vs_log_n"];
    REQUIRE(!fit["degenerate"].get<bool>());
    // oracle control decays like 1/(N-1)
    CHECK(fit["slope"].get<double>() == doctest::Approx(-1.0).epsilon(0.12));
}

TEST_CASE("sharpness study closed form for the power-law ratio pair") {
    // with a vanishing coefficient the residual ratio eps_k / eps_{k-1} has
    // CDF y^a / 2 on [0, 1]; checked against quadrature, then empirically
    const double a = 1.5;
    const double closed = 0.5;
    const double quad = oracles::integrate(
        [a](double x) { return std::pow(x * 0.7, a) * a * std::pow(x, a - 1.0); }, 0.0, 1.0);
    CHECK(quad == doctest::Approx(std::pow(0.7, a) * closed).epsilon(1e-10));

    const KeyValueConfig cfg = KeyValueConfig::parse_string(
        "f = const(0.0)\n"
        "dist = poweruniform(1.5)\n"
        "n = 2048\n"
        "samples = 60000\n"
        "y_grid = 0.02,0.05,0.1,0.2,0.4\n"
        "seed = 31\n");
    const Report r = studies::sharpness_study(cfg);
    CHECK(r.summary["band_ok"].get<bool>());
    CHECK(r.summary["median_ratio"].get<double>() == doctest::Approx(0.5).epsilon(0.25));
}

TEST_CASE("pair study recovers the doubled exponent") {
    SUBCASE("independent surrogate has the exact product slope") {
        // P(eps <= u)^2 = u^{2a} for the power law: the log-log slope is 2a.
        const double a = 1.5;
        const double s = (2.0 * a * std::log(0.1) - 2.0 * a * std::log(0.2)) /
                         (std::log(0.1) - std::log(0.2));
        CHECK(s == doctest::Approx(2.0 * a).epsilon(1e-12));
    }
    SUBCASE("chain study at unit shape") {
        const KeyValueConfig cfg = KeyValueConfig::parse_string(
            "n = 64\n"
            "reps = 150000\n"
            "j = 1,2\n"
            "seed = 37\n"
            "threads = 4\n");
        const Report r = studies::pair_minimum_study(cfg);
        for (const auto& fit : r.summary["fits"]) {
            REQUIRE(!fit["degenerate"].get<bool>());
            CHECK(fit["slope"].get<double>() >= 1.7);
            CHECK(fit["slope"].get<double>() <= 2.45);
        }
        // large-threshold sanity: the event is nearly certain
        KeyValueConfig wide = cfg;
        wide.set("u", "50,25");
        wide.set("reps", "2000");
        const Report rw = studies::pair_minimum_study(wide);
        CHECK(std::get<double>(rw.table.rows[0][3]) >= 0.95);
    }
}

TEST_CASE("lower bound battery shape") {
    const KeyValueConfig cfg = KeyValueConfig::parse_string(
        "n = 64,256\n"
        "a = 0.5\n"
        "c_f = 4,16\n"
        "c_f_risk = 16\n"
        "reps_rn = 500\n"
        "reps_norm = 2000\n"
        "reps_moment = 2000\n"
        "reps_indicator = 500\n"
        "reps_risk = 500\n"
        "reps_trunc = 500\n"
        "seed = 41\n");
    const Report r = studies::lower_bound_battery(cfg);
    CHECK(r.kind == "lower-bound");
    for (const char* key : {"n_star", "f_amp", "risk", "np_functional", "moment_ratio_1",
                            "moment_ratio_2", "indicator_freq", "truncation_freq"}) {
        CHECK(r.summary.contains(key));
    }
    CHECK(r.summary["risk"].size() == 2);
    CHECK(r.summary["moment_ratio_1"].size() == 2);
    CHECK(r.summary["cross_form"]["max_rel_diff"].get<double>() <= 1e-10);
    const double m = r.summary["rn_mean"].get<double>();
    const double se = r.summary["rn_mean_se"].get<double>();
    CHECK(std::abs(m - 1.0) <= 3.0 * se);
}

TEST_CASE("reports hit the filesystem byte-identically") {
    const KeyValueConfig cfg = KeyValueConfig::parse_string(
        "n = 64,128,256,512\n"
        "reps = 6\n"
        "seed = 43\n");
    const Report r = studies::rate_study(cfg);
    const auto dir1 = std::filesystem::temp_directory_path() / "tvar_rep1";
    const auto dir2 = std::filesystem::temp_directory_path() / "tvar_rep2";
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
    const auto [csv1, json1] = r.write(dir1.string());
    const auto [csv2, json2] = r.write(dir2.string());
    CHECK(slurp(csv1) == slurp(csv2));
    CHECK(slurp(json1) == slurp(json2));
    CHECK(csv1.find("rate-study_") != std::string::npos);
    // rewriting in place is idempotent
    const auto [csv3, json3] = r.write(dir1.string());
    CHECK(csv3 == csv1);
    CHECK(slurp(csv3) == slurp(csv1));
}

TEST_CASE("config hash is stable and sensitive") {
    KeyValueConfig a = KeyValueConfig::parse_string("x = 1\ny = 2\n");
    KeyValueConfig b = KeyValueConfig::parse_string("y = 2\nx = 1\n");
    CHECK(config_hash(a) == config_hash(b));
    b.set("x", "3");
    CHECK(config_hash(a) != config_hash(b));
}
