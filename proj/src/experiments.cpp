#include "tvar/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tvar/coefficient.hpp"
#include "tvar/distributions.hpp"
#include "tvar/errors.hpp"
#include "tvar/estimator.hpp"
#include "tvar/minimax.hpp"
#include "tvar/numerics.hpp"
#include "tvar/parallel.hpp"
#include "tvar/prediction.hpp"
#include "tvar/process.hpp"

namespace tvar::studies {

namespace {

constexpr std::size_t kMinN = 16;

std::uint64_t rep_seed(std::uint64_t master, std::size_t n_value, std::size_t rep) {
    return derive_seed(derive_seed(master, n_value), rep);
}

std::vector<std::size_t> read_n_list(const KeyValueConfig& cfg, const std::string& fallback) {
    std::vector<std::size_t> ns = cfg.has("n")
                                      ? cfg.get_size_list("n")
                                      : KeyValueConfig::parse_string("n = " + fallback)
                                            .get_size_list("n");
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    for (std::size_t n : ns) {
        if (n < kMinN) {
            throw config_error("config key 'n': values must be at least " +
                               std::to_string(kMinN));
        }
    }
    return ns;
}

void require_rate_span(const std::vector<std::size_t>& ns) {
    if (ns.size() < 4 || ns.back() < 4 * ns.front()) {
        throw config_error(
            "config key 'n': need at least 4 distinct values spanning two octaves");
    }
}

struct CommonSetup {
    CoefficientFunction f;
    InnovationDist dist;
    double a = 1.0;
    double beta = 1.0;
    double x = 0.5;
    std::optional<double> h_override;
    std::uint64_t seed = 1;
    std::size_t reps = 200;
    int threads = 1;
};

CommonSetup read_common(const KeyValueConfig& cfg, const std::string& f_default) {
    CommonSetup s;
    s.f = CoefficientFunction::parse(cfg.get_string_or("f", f_default));
    s.dist = InnovationDist::parse(cfg.get_string_or("dist", "gamma(1,1)"));
    s.a = cfg.get_double_or("a", s.dist.shape);
    if (!(s.a > 0.0)) throw config_error("config key 'a' must be positive");
    s.beta = cfg.get_double_or("beta", 1.0);
    if (!(s.beta > 0.0)) throw config_error("config key 'beta' must be positive");
    s.x = cfg.get_double_or("x", 0.5);
    if (s.x < 0.0 || s.x > 1.0) throw config_error("config key 'x' must lie in [0,1]");
    s.h_override = cfg.get_double_opt("h");
    if (s.h_override && !(*s.h_override > 0.0)) {
        throw config_error("config key 'h' must be positive");
    }
    s.seed = cfg.get_u64_or("seed", 1);
    s.reps = static_cast<std::size_t>(cfg.get_u64_or("reps", 200));
    if (s.reps == 0) throw config_error("config key 'reps' must be positive");
    s.threads = static_cast<int>(cfg.get_u64_or("threads", 1));
    if (s.threads < 1) throw config_error("config key 'threads' must be at least 1");
    return s;
}

void echo_common(KeyValueConfig& out, const CommonSetup& s, const std::string& kind) {
    out.set("kind", kind);
    out.set("f", s.f.label);
    out.set("dist", s.dist.to_string());
    out.set("a", format_g17(s.a));
    out.set("beta", format_g17(s.beta));
    out.set("x", format_g17(s.x));
    if (s.h_override) out.set("h", format_g17(*s.h_override));
    out.set("seed", std::to_string(s.seed));
    out.set("reps", std::to_string(s.reps));
    out.set("threads", std::to_string(s.threads));
    out.set("derived.degree", std::to_string(poly_degree(s.beta)));
}

std::string join_sizes(const std::vector<std::size_t>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

std::string join_doubles(const std::vector<double>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << format_g17(v[i]);
    return os.str();
}

// |f_hat^tau(x) - f(x)| for one replication.
double qmle_error(const CommonSetup& s, std::size_t n_value, double h, std::uint64_t seed) {
    const Path path = simulate_path(s.f, s.dist, n_value, seed);
    const RegressionSample sample = regression_transform(path);
    const LocalFit fit = fit_local(sample, s.x, h, s.beta);
    const double tau = std::pow(std::log(static_cast<double>(fit.n_local)), 2.0);
    const double est = tau > 0.0 ? truncate_estimate(fit.f_hat, tau) : 0.0;
    return std::abs(est - s.f(s.x));
}

std::vector<double> qmle_errors(const CommonSetup& s, std::size_t n_value, double h,
                                std::size_t reps, std::size_t rep_offset) {
    std::vector<double> err(reps);
    par::for_each_index(reps, s.threads, [&](std::size_t i) {
        err[i] = qmle_error(s, n_value, h, rep_seed(s.seed, n_value, rep_offset + i));
    });
    return err;
}

nlohmann::ordered_json fit_to_json(const LineFit& fit) {
    nlohmann::ordered_json j;
    j["degenerate"] = fit.degenerate;
    if (!fit.degenerate) {
        j["slope"] = fit.slope;
        j["intercept"] = fit.intercept;
        j["slope_se"] = fit.slope_se;
        j["r2"] = fit.r2;
    }
    j["points"] = fit.n;
    return j;
}

}  // namespace

Report rate_study(const KeyValueConfig& cfg) {
    CommonSetup s = read_common(cfg, "sine(0.4,0.25)");
    const std::vector<std::size_t> ns = read_n_list(cfg, "512,1024,2048,4096,8192");
    require_rate_span(ns);
    const std::string est_kind = cfg.get_string_or("estimator", "qmle");
    if (est_kind != "qmle" && est_kind != "baseline" && est_kind != "both") {
        throw config_error("config key 'estimator' must be qmle, baseline or both");
    }
    const bool want_qmle = est_kind != "baseline";
    const bool want_base = est_kind != "qmle";

    Report report;
    report.kind = "rate-study";
    echo_common(report.resolved, s, report.kind);
    report.resolved.set("n", join_sizes(ns));
    report.resolved.set("estimator", est_kind);

    Table& table = report.table;
    table.columns = {"N"};
    if (want_qmle) {
        table.columns.insert(table.columns.end(),
                             {"h", "n_local", "mean_abs_err", "mean_sq_err", "se_mean"});
    }
    if (want_base) {
        table.columns.insert(table.columns.end(),
                             {"h_baseline", "mean_abs_err_baseline", "se_mean_baseline"});
    }

    std::vector<double> log_n, log_err_q, log_err_b;
    std::vector<double> h_stars;
    bool degenerate_q = false, degenerate_b = false;

    for (std::size_t n_value : ns) {
        const double h_q = s.h_override.value_or(optimal_bandwidth(n_value, s.a, s.beta));
        const double h_b =
            s.h_override.value_or(std::pow(static_cast<double>(n_value),
                                           -1.0 / (2.0 * s.beta + 1.0)));
        h_stars.push_back(h_q);

        std::vector<double> err_q, err_b;
        if (want_qmle) {
            err_q = qmle_errors(s, n_value, h_q, s.reps, 0);
        }
        if (want_base) {
            err_b.resize(s.reps);
            par::for_each_index(s.reps, s.threads, [&](std::size_t i) {
                const Path path =
                    simulate_path(s.f, s.dist, n_value, rep_seed(s.seed, n_value, i));
                err_b[i] = std::abs(ols_baseline(path, s.x, h_b) - s.f(s.x));
            });
        }

        std::vector<std::variant<double, std::int64_t, std::string>> cells;
        cells.emplace_back(static_cast<std::int64_t>(n_value));
        if (want_qmle) {
            const std::size_t n_local = window_indices(n_value, s.x, h_q).size();
            const double m1 = mean_of(err_q);
            double m2 = 0.0;
            for (double e : err_q) m2 += e * e;
            m2 /= static_cast<double>(err_q.size());
            cells.emplace_back(h_q);
            cells.emplace_back(static_cast<std::int64_t>(n_local));
            cells.emplace_back(m1);
            cells.emplace_back(m2);
            cells.emplace_back(stderr_of_mean(err_q));
            if (m1 > 0.0) {
                log_n.push_back(std::log(static_cast<double>(n_value)));
                log_err_q.push_back(std::log(m1));
            } else {
                degenerate_q = true;
            }
        }
        if (want_base) {
            const double m1 = mean_of(err_b);
            cells.emplace_back(h_b);
            cells.emplace_back(m1);
            cells.emplace_back(stderr_of_mean(err_b));
            if (m1 > 0.0) {
                log_err_b.push_back(std::log(m1));
            } else {
                degenerate_b = true;
            }
        }
        table.rows.push_back(std::move(cells));
    }

    if (want_qmle) {
        std::vector<double> taus;
        for (std::size_t n_value : ns) {
            const double h_q = s.h_override.value_or(optimal_bandwidth(n_value, s.a, s.beta));
            const std::size_t n_local = window_indices(n_value, s.x, h_q).size();
            taus.push_back(std::pow(std::log(static_cast<double>(n_local)), 2.0));
        }
        report.resolved.set("derived.tau_n", join_doubles(taus));
    }

    nlohmann::ordered_json& summary = report.summary;
    summary["theory_slope_qmle"] = -s.beta / (s.a * s.beta + 1.0);
    summary["theory_slope_baseline"] = -s.beta / (2.0 * s.beta + 1.0);
    if (want_qmle) {
        LineFit fit;
        if (!degenerate_q && log_err_q.size() == ns.size()) {
            fit = fit_line(log_n, log_err_q);
        }
        summary["fit_qmle"] = fit_to_json(fit);
    }
    if (want_base) {
        LineFit fit;
        if (!degenerate_b && log_err_b.size() == ns.size()) {
            std::vector<double> log_n_all;
            for (std::size_t n_value : ns) log_n_all.push_back(std::log(static_cast<double>(n_value)));
            fit = fit_line(log_n_all, log_err_b);
        }
        summary["fit_baseline"] = fit_to_json(fit);
    }
    report.resolved.set("derived.h_star", join_doubles(h_stars));
    return report;
}

Report concentration_study(const KeyValueConfig& cfg) {
    CommonSetup s = read_common(cfg, "const(0.5)");
    const std::vector<std::size_t> ns = read_n_list(cfg, "4096");
    const std::size_t n_value = ns.back();
    if (s.reps < 100) throw config_error("config key 'reps': need at least 100");

    const double h = s.h_override.value_or(optimal_bandwidth(n_value, s.a, s.beta));
    const std::size_t n_local = window_indices(n_value, s.x, h).size();
    const double n_local_d = static_cast<double>(n_local);

    const double v_cap = std::pow(n_local_d, 1.0 / (1.0 + s.a)) / std::log(n_local_d);
    const double v_max = cfg.get_double_or("v_max", v_cap);
    if (!(v_max > 0.0) || v_max > v_cap + 1e-12) {
        throw config_error("config key 'v_max' must lie in (0, n^(1/(1+a))/log n = " +
                           format_g17(v_cap) + "]");
    }
    const std::size_t v_points = static_cast<std::size_t>(cfg.get_u64_or("v_points", 10));
    if (v_points < 4) throw config_error("config key 'v_points': need at least 4");
    std::vector<double> v_grid(v_points);
    for (std::size_t i = 0; i < v_points; ++i) {
        v_grid[i] = v_max * static_cast<double>(i + 1) / static_cast<double>(v_points);
    }

    const std::size_t pilot_reps = static_cast<std::size_t>(
        cfg.get_u64_or("pilot_reps", std::max<std::uint64_t>(200, s.reps / 10)));

    // Pilot pass on a disjoint seed stream calibrates the two threshold
    // constants: c1 from the mean error, c2 from the median positive excess
    // on the local-minimum scale.
    const std::vector<double> pilot = qmle_errors(s, n_value, h, pilot_reps, s.reps);
    const double h_pow_beta = std::pow(h, s.beta);
    const double c1_hat = mean_of(pilot) / h_pow_beta;
    std::vector<double> excess;
    for (double e : pilot) {
        const double d = e - c1_hat * h_pow_beta;
        if (d > 0.0) excess.push_back(std::pow(n_local_d, 1.0 / s.a) * d);
    }
    bool pilot_degenerate = excess.empty();
    const double c2_hat = pilot_degenerate ? 1.0 : median_of(std::move(excess));

    const std::vector<double> errors = qmle_errors(s, n_value, h, s.reps, 0);

    Report report;
    report.kind = "concentration";
    echo_common(report.resolved, s, report.kind);
    report.resolved.set("n", std::to_string(n_value));
    report.resolved.set("v_max", format_g17(v_max));
    report.resolved.set("v_points", std::to_string(v_points));
    report.resolved.set("pilot_reps", std::to_string(pilot_reps));
    report.resolved.set("derived.h_star", format_g17(h));
    report.resolved.set("derived.n_local", std::to_string(n_local));
    report.resolved.set("derived.tau_n",
                        format_g17(std::pow(std::log(n_local_d), 2.0)));
    report.resolved.set("derived.c1_hat", format_g17(c1_hat));
    report.resolved.set("derived.c2_hat", format_g17(c2_hat));

    Table& table = report.table;
    table.columns = {"v", "v_pow_a", "threshold", "count", "freq"};

    const auto add_row = [&](double v) {
        const double threshold =
            c1_hat * h_pow_beta + c2_hat * std::pow(n_local_d, -1.0 / s.a) * v;
        std::size_t count = 0;
        for (double e : errors) count += (e >= threshold) ? 1 : 0;
        const double freq = static_cast<double>(count) / static_cast<double>(errors.size());
        table.rows.push_back({v, std::pow(v, s.a), threshold,
                              static_cast<std::int64_t>(count), freq});
        return freq;
    };

    add_row(0.0);  // sanity row, not part of the fit
    std::vector<double> xs, ys;
    std::size_t excluded = 0;
    for (double v : v_grid) {
        const double freq = add_row(v);
        if (freq > 0.0) {
            xs.push_back(std::pow(v, s.a));
            ys.push_back(std::log(freq));
        } else {
            ++excluded;
        }
    }

    LineFit fit;
    if (xs.size() >= 4) fit = fit_line(xs, ys);
    report.summary["fit_log_freq_vs_v_pow_a"] = fit_to_json(fit);
    report.summary["c1_hat"] = c1_hat;
    report.summary["c2_hat"] = c2_hat;
    report.summary["pilot_degenerate"] = pilot_degenerate;
    report.summary["rows_excluded_zero_freq"] = excluded;
    report.summary["n_local"] = n_local;
    report.summary["v_cap"] = v_cap;
    return report;
}

Report prediction_study(const KeyValueConfig& cfg) {
    CommonSetup s = read_common(cfg, "sine(0.4,0.25)");
    const std::vector<std::size_t> ns = read_n_list(cfg, "512,1024,2048,4096,8192");
    require_rate_span(ns);
    const bool oracle = cfg.get_string_or("oracle", "false") == "true";

    Report report;
    report.kind = "prediction-study";
    echo_common(report.resolved, s, report.kind);
    report.resolved.set("n", join_sizes(ns));
    report.resolved.set("oracle", oracle ? "true" : "false");

    Table& table = report.table;
    table.columns = {"N", "mse_hat", "var_eps", "abs_gap"};

    const double var_eps = s.dist.variance();
    const double mean_eps = s.dist.mean();

    std::vector<double> log_n, log_gap, gap_se, mse_direct, oracle_theory;
    std::vector<double> h_stars;
    bool degenerate = false;

    for (std::size_t n_value : ns) {
        const double h = s.h_override.value_or(optimal_bandwidth(n_value, s.a, s.beta));
        h_stars.push_back(h);
        std::vector<double> gap_samples(s.reps);
        std::vector<double> direct_sq(s.reps);
        par::for_each_index(s.reps, s.threads, [&](std::size_t i) {
            SeededRng rng(rep_seed(s.seed, n_value, i));
            const Path path = simulate_path_core(s.f, s.dist, n_value, 0, rng);
            const double eps_next = s.dist.sample(rng);
            const double x_next = s.f(1.0) * path.x[n_value] + eps_next;

            std::vector<CurvePoint> curve;
            const std::vector<double> grid = prediction_grid(n_value);
            if (oracle) {
                curve.resize(grid.size());
                for (std::size_t g = 0; g < grid.size(); ++g) {
                    curve[g].x = grid[g];
                    curve[g].h = h;
                    curve[g].f_hat = s.f(grid[g]);
                    curve[g].f_hat_truncated = curve[g].f_hat;
                }
            } else {
                const RegressionSample sample = regression_transform(path);
                curve = estimate_curve(sample, grid, s.a, s.beta, h, 1);
            }
            const PredictionResult pred = predict_next(path, curve);
            const double d = path.x[n_value] * (s.f(1.0) - curve.back().f_hat_truncated) +
                             (mean_eps - pred.residual_mean);
            gap_samples[i] = d * d;
            const double err = x_next - pred.x_hat_next;
            direct_sq[i] = err * err;
        });

        const double gap_hat = mean_of(gap_samples);
        const double mse_hat = var_eps + gap_hat;
        table.rows.push_back({static_cast<std::int64_t>(n_value), mse_hat, var_eps, gap_hat});
        gap_se.push_back(stderr_of_mean(gap_samples));
        mse_direct.push_back(mean_of(direct_sq));
        oracle_theory.push_back(var_eps / static_cast<double>(n_value - 1));
        if (gap_hat > 0.0) {
            log_n.push_back(std::log(static_cast<double>(n_value)));
            log_gap.push_back(std::log(gap_hat));
        } else {
            degenerate = true;
        }
    }

    LineFit fit;
    if (!degenerate && log_gap.size() == ns.size()) fit = fit_line(log_n, log_gap);
    report.summary["fit_log_gap_vs_log_n"] = fit_to_json(fit);
    report.summary["theory_slope"] = -std::min(2.0 * s.beta / (s.a * s.beta + 1.0), 1.0);
    report.summary["gap_se"] = gap_se;
    report.summary["mse_direct"] = mse_direct;
    report.summary["oracle_gap_theory"] = oracle_theory;
    report.summary["oracle"] = oracle;
    report.resolved.set("derived.h_star", join_doubles(h_stars));
    report.resolved.set("derived.tau_rule", "log^2(n_local) per curve point");
    return report;
}

Report sharpness_study(const KeyValueConfig& cfg) {
    CommonSetup s = read_common(cfg, "sine(0.4,0.25)");
    const std::vector<std::size_t> ns = read_n_list(cfg, "4096");
    const std::size_t n_value = ns.back();
    const std::size_t samples =
        static_cast<std::size_t>(cfg.get_u64_or("samples", 100000));
    if (samples < 1000) throw config_error("config key 'samples': need at least 1000");

    const double h = s.h_override.value_or(optimal_bandwidth(n_value, s.a, s.beta));
    const Window w = window_indices(n_value, s.x, h);
    const std::size_t per_path = w.size();
    const std::size_t paths = (samples + per_path - 1) / per_path;

    std::vector<double> pooled(paths * per_path);
    par::for_each_index(paths, s.threads, [&](std::size_t i) {
        const Path path = simulate_path(s.f, s.dist, n_value, rep_seed(s.seed, n_value, i));
        const std::vector<double> em = modified_innovations(path);
        for (std::size_t k = w.lo; k <= w.hi; ++k) {
            pooled[i * per_path + (k - w.lo)] = em[k - 1];
        }
    });
    std::sort(pooled.begin(), pooled.end());

    std::vector<double> y_grid = cfg.has("y_grid") ? cfg.get_double_list("y_grid")
                                                   : std::vector<double>{};
    if (y_grid.empty()) {
        for (int i = 0; i <= 8; ++i) {
            y_grid.push_back(std::pow(10.0, -3.0 + 2.0 * static_cast<double>(i) / 8.0));
        }
    }

    Report report;
    report.kind = "sharpness";
    echo_common(report.resolved, s, report.kind);
    report.resolved.set("n", std::to_string(n_value));
    report.resolved.set("samples", std::to_string(samples));
    report.resolved.set("derived.h_star", format_g17(h));
    report.resolved.set("derived.n_local", std::to_string(per_path));
    report.resolved.set("derived.pooled", std::to_string(pooled.size()));

    Table& table = report.table;
    table.columns = {"y", "count", "cdf_hat", "ratio"};
    std::vector<double> ratios;
    for (double y : y_grid) {
        const auto it = std::upper_bound(pooled.begin(), pooled.end(), y);
        const std::size_t count = static_cast<std::size_t>(it - pooled.begin());
        const double cdf_hat = static_cast<double>(count) / static_cast<double>(pooled.size());
        const double ratio = cdf_hat / std::pow(y, s.a);
        table.rows.push_back({y, static_cast<std::int64_t>(count), cdf_hat, ratio});
        ratios.push_back(ratio);
    }

    const double med = median_of(ratios);
    double lo = ratios.empty() ? 0.0 : ratios.front(), hi = lo;
    for (double r : ratios) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    report.summary["median_ratio"] = med;
    report.summary["min_ratio"] = lo;
    report.summary["max_ratio"] = hi;
    report.summary["band_ok"] = (med > 0.0) && (lo >= med / 10.0) && (hi <= med * 10.0);
    report.summary["pooled_samples"] = pooled.size();
    return report;
}

Report pair_minimum_study(const KeyValueConfig& cfg) {
    CommonSetup s = read_common(cfg, "const(0.5)");
    const std::vector<std::size_t> ns = read_n_list(cfg, "64");
    const std::size_t n_value = ns.back();

    std::vector<std::size_t> j_values = cfg.has("j") ? cfg.get_size_list("j")
                                                     : std::vector<std::size_t>{1, 2, 5};
    std::sort(j_values.begin(), j_values.end());
    for (std::size_t j : j_values) {
        if (j == 0) throw config_error("config key 'j': gaps must be positive");
    }
    std::vector<double> u_grid = cfg.has("u") ? cfg.get_double_list("u")
                                              : std::vector<double>{0.1, 0.07, 0.05, 0.025};
    std::sort(u_grid.begin(), u_grid.end(), std::greater<>());
    for (double u : u_grid) {
        if (!(u > 0.0)) throw config_error("config key 'u': thresholds must be positive");
    }

    const std::size_t k_anchor = n_value / 2;
    if (k_anchor + j_values.back() > n_value) {
        throw config_error("config key 'n': too small for the largest gap j");
    }

    // counts[j][u]
    std::vector<std::vector<std::size_t>> counts(j_values.size(),
                                                 std::vector<std::size_t>(u_grid.size(), 0));
    const int threads = s.threads;
    const std::size_t block = 1024;
    const std::size_t blocks = (s.reps + block - 1) / block;
    std::vector<std::vector<std::vector<std::size_t>>> block_counts(blocks, counts);
    par::for_each_index(blocks, threads, [&](std::size_t bi) {
        auto& local = block_counts[bi];
        const std::size_t lo = bi * block;
        const std::size_t hi = std::min(s.reps, lo + block);
        for (std::size_t rep = lo; rep < hi; ++rep) {
            const Path path =
                simulate_path(s.f, s.dist, n_value, rep_seed(s.seed, n_value, rep));
            const double eps_k = path.innovations[k_anchor - 1];
            const double x_km1 = path.x[k_anchor - 1];
            for (std::size_t ji = 0; ji < j_values.size(); ++ji) {
                const std::size_t kj = k_anchor + j_values[ji];
                const double eps_kj = path.innovations[kj - 1];
                const double x_kjm1 = path.x[kj - 1];
                for (std::size_t ui = 0; ui < u_grid.size(); ++ui) {
                    if (eps_k <= u_grid[ui] * x_km1 && eps_kj <= u_grid[ui] * x_kjm1) {
                        ++local[ji][ui];
                    }
                }
            }
        }
    });
    for (const auto& local : block_counts) {
        for (std::size_t ji = 0; ji < j_values.size(); ++ji) {
            for (std::size_t ui = 0; ui < u_grid.size(); ++ui) {
                counts[ji][ui] += local[ji][ui];
            }
        }
    }

    Report report;
    report.kind = "pair-check";
    echo_common(report.resolved, s, report.kind);
    report.resolved.set("n", std::to_string(n_value));
    report.resolved.set("j", join_sizes(j_values));
    report.resolved.set("u", join_doubles(u_grid));
    report.resolved.set("derived.k_anchor", std::to_string(k_anchor));

    Table& table = report.table;
    table.columns = {"j", "u", "count", "prob", "flagged"};
    nlohmann::ordered_json fits = nlohmann::ordered_json::array();
    const std::size_t resolution_floor = 10;
    for (std::size_t ji = 0; ji < j_values.size(); ++ji) {
        std::vector<double> xs, ys;
        for (std::size_t ui = 0; ui < u_grid.size(); ++ui) {
            const std::size_t count = counts[ji][ui];
            const double prob = static_cast<double>(count) / static_cast<double>(s.reps);
            const bool flagged = count < resolution_floor;
            table.rows.push_back({static_cast<std::int64_t>(j_values[ji]), u_grid[ui],
                                  static_cast<std::int64_t>(count), prob,
                                  static_cast<std::int64_t>(flagged ? 1 : 0)});
            if (!flagged) {
                xs.push_back(std::log(u_grid[ui]));
                ys.push_back(std::log(prob));
            }
        }
        LineFit fit;
        if (xs.size() >= 2) fit = fit_line(xs, ys);
        nlohmann::ordered_json jf = fit_to_json(fit);
        jf["j"] = j_values[ji];
        fits.push_back(jf);
    }
    report.summary["fits"] = fits;
    report.summary["resolution_floor"] = resolution_floor;
    report.summary["theory_slope"] = 2.0 * s.a;
    return report;
}

Report lower_bound_battery(const KeyValueConfig& cfg) {
    const double a = cfg.get_double_or("a", 0.5);
    const double b = cfg.get_double_or("b", 1.0);
    const double beta = cfg.get_double_or("beta", 1.0);
    const std::vector<std::size_t> ns = read_n_list(cfg, "256,1024,4096");
    std::vector<double> cf_values = cfg.has("c_f") ? cfg.get_double_list("c_f")
                                                   : std::vector<double>{1, 4, 16, 64};
    const double cf_risk = cfg.get_double_or("c_f_risk", 16.0);
    const std::uint64_t seed = cfg.get_u64_or("seed", 1);
    const int threads = static_cast<int>(cfg.get_u64_or("threads", 1));
    const std::size_t reps_rn = static_cast<std::size_t>(cfg.get_u64_or("reps_rn", 10000));
    const std::size_t reps_norm =
        static_cast<std::size_t>(cfg.get_u64_or("reps_norm", 100000));
    const std::size_t reps_moment =
        static_cast<std::size_t>(cfg.get_u64_or("reps_moment", 100000));
    const std::size_t reps_indicator =
        static_cast<std::size_t>(cfg.get_u64_or("reps_indicator", 10000));
    const std::size_t reps_risk =
        static_cast<std::size_t>(cfg.get_u64_or("reps_risk", 10000));
    const std::size_t reps_trunc =
        static_cast<std::size_t>(cfg.get_u64_or("reps_trunc", 10000));

    const std::size_t n_max = ns.back();

    Report report;
    report.kind = "lower-bound";
    report.resolved.set("kind", report.kind);
    report.resolved.set("a", format_g17(a));
    report.resolved.set("b", format_g17(b));
    report.resolved.set("beta", format_g17(beta));
    report.resolved.set("n", join_sizes(ns));
    report.resolved.set("c_f", join_doubles(cf_values));
    report.resolved.set("c_f_risk", format_g17(cf_risk));
    report.resolved.set("seed", std::to_string(seed));
    report.resolved.set("threads", std::to_string(threads));
    report.resolved.set("reps_rn", std::to_string(reps_rn));
    report.resolved.set("reps_norm", std::to_string(reps_norm));
    report.resolved.set("reps_moment", std::to_string(reps_moment));
    report.resolved.set("reps_indicator", std::to_string(reps_indicator));
    report.resolved.set("reps_risk", std::to_string(reps_risk));
    report.resolved.set("reps_trunc", std::to_string(reps_trunc));

    nlohmann::ordered_json& summary = report.summary;
    summary["axes"]["n"] = ns;
    summary["axes"]["c_f"] = cf_values;

    // Cross-form identity of the two likelihood-ratio evaluations, checked on
    // half null-hypothesis and half signal-hypothesis samples.
    {
        const lab::HypothesisPair hp = lab::HypothesisPair::make(n_max, a, b, beta, cf_risk);
        std::vector<double> rel(reps_rn, 0.0);
        std::vector<unsigned char> usable(reps_rn, 0);
        par::for_each_index(reps_rn, threads, [&](std::size_t i) {
            SeededRng rng(derive_seed(derive_seed(seed, 101), i));
            const lab::LabSample sample =
                (i % 2 == 0) ? lab::simulate_null(hp, rng, hp.n_star + 1)
                             : lab::simulate_signal(hp, rng, hp.n_star + 1);
            const lab::LikelihoodEvaluation ev = lab::likelihood_ratio(sample, hp);
            if (ev.indicator_product == 1 && ev.truncation_ok == 1) {
                usable[i] = 1;
                rel[i] = std::abs(ev.rn_value - std::exp(ev.log_sum_u)) /
                         std::max(ev.rn_value, 1e-300);
            }
        });
        double max_rel = 0.0;
        std::size_t checked = 0;
        for (std::size_t i = 0; i < reps_rn; ++i) {
            if (usable[i]) {
                ++checked;
                max_rel = std::max(max_rel, rel[i]);
            }
        }
        summary["cross_form"]["checked"] = checked;
        summary["cross_form"]["max_rel_diff"] = max_rel;
        summary["cross_form"]["n_star"] = hp.n_star;
    }

    // Change-of-measure normalization: the untruncated likelihood ratio
    // under the null has mean one.
    {
        const double cf_min = *std::min_element(cf_values.begin(), cf_values.end());
        const lab::HypothesisPair hp = lab::HypothesisPair::make(n_max, a, b, beta, cf_min);
        std::vector<double> rn(reps_norm);
        par::for_each_index(reps_norm, threads, [&](std::size_t i) {
            SeededRng rng(derive_seed(derive_seed(seed, 202), i));
            rn[i] =
                lab::likelihood_ratio(lab::simulate_null(hp, rng, hp.n_star + 1), hp).rn_value;
        });
        summary["rn_mean"] = mean_of(rn);
        summary["rn_mean_se"] = stderr_of_mean(rn);
        summary["rn_mean_c_f"] = cf_min;
    }

    // Increment moments across the amplitude sweep; preconditions that fail
    // are reported as flagged entries, not fatal errors.
    {
        nlohmann::ordered_json ratio1 = nlohmann::ordered_json::array();
        nlohmann::ordered_json ratio2 = nlohmann::ordered_json::array();
        nlohmann::ordered_json ratio_var = nlohmann::ordered_json::array();
        nlohmann::ordered_json flagged = nlohmann::ordered_json::array();
        nlohmann::ordered_json f_amp_axis = nlohmann::ordered_json::array();
        for (std::size_t ci = 0; ci < cf_values.size(); ++ci) {
            const lab::HypothesisPair hp =
                lab::HypothesisPair::make(n_max, a, b, beta, cf_values[ci]);
            f_amp_axis.push_back(hp.f_amp);
            try {
                const lab::MomentReport mr = lab::moment_check(
                    hp, reps_moment, derive_seed(seed, 303 + ci), threads);
                ratio1.push_back(mr.ratio_mean);
                ratio2.push_back(mr.ratio_second);
                ratio_var.push_back(mr.ratio_var);
                flagged.push_back(false);
            } catch (const config_error& e) {
                ratio1.push_back(nullptr);
                ratio2.push_back(nullptr);
                ratio_var.push_back(nullptr);
                flagged.push_back(std::string(e.what()));
            }
        }
        summary["moment_ratio_1"] = ratio1;
        summary["moment_ratio_2"] = ratio2;
        summary["moment_ratio_var"] = ratio_var;
        summary["moment_flagged"] = flagged;
        summary["moment_f_amp"] = f_amp_axis;
    }

    // Indicator-product frequency across the amplitude sweep.
    {
        nlohmann::ordered_json freq = nlohmann::ordered_json::array();
        for (std::size_t ci = 0; ci < cf_values.size(); ++ci) {
            const lab::HypothesisPair hp =
                lab::HypothesisPair::make(n_max, a, b, beta, cf_values[ci]);
            freq.push_back(lab::indicator_check(hp, reps_indicator,
                                                derive_seed(seed, 404 + ci), threads));
        }
        summary["indicator_freq"] = freq;
    }

    // Test risk and truncation frequency across N.
    {
        nlohmann::ordered_json n_star_axis = nlohmann::ordered_json::array();
        nlohmann::ordered_json f_amp_axis = nlohmann::ordered_json::array();
        nlohmann::ordered_json risk = nlohmann::ordered_json::array();
        nlohmann::ordered_json np_func = nlohmann::ordered_json::array();
        nlohmann::ordered_json trunc = nlohmann::ordered_json::array();
        Table& table = report.table;
        table.columns = {"N", "n_star", "f_amp", "risk", "np_functional", "truncation_freq"};
        for (std::size_t ni = 0; ni < ns.size(); ++ni) {
            const lab::HypothesisPair hp =
                lab::HypothesisPair::make(ns[ni], a, b, beta, cf_risk);
            const lab::RiskReport rr =
                lab::test_risk(hp, reps_risk, derive_seed(seed, 505 + ni), threads);
            const double tf =
                lab::truncation_check(hp, reps_trunc, derive_seed(seed, 606 + ni), threads);
            n_star_axis.push_back(hp.n_star);
            f_amp_axis.push_back(hp.f_amp);
            risk.push_back(rr.risk);
            np_func.push_back(rr.np_functional);
            trunc.push_back(tf);
            table.rows.push_back({static_cast<std::int64_t>(ns[ni]),
                                  static_cast<std::int64_t>(hp.n_star), hp.f_amp, rr.risk,
                                  rr.np_functional, tf});
        }
        summary["n_star"] = n_star_axis;
        summary["f_amp"] = f_amp_axis;
        summary["risk"] = risk;
        summary["np_functional"] = np_func;
        summary["np_grid"] = {{"points", lab::kNpGridPoints}, {"range", {1e-3, 1e3}}};
        summary["truncation_freq"] = trunc;
    }

    return report;
}

}  // namespace tvar::studies
