#include "tvar/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tvar/coefficient.hpp"
#include "tvar/config.hpp"
#include "tvar/distributions.hpp"
#include "tvar/errors.hpp"
#include "tvar/estimator.hpp"
#include "tvar/experiments.hpp"
#include "tvar/parallel.hpp"
#include "tvar/prediction.hpp"
#include "tvar/process.hpp"
#include "tvar/report.hpp"

namespace tvar::cli {

namespace {

struct GlobalOptions {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> threads_override;
    bool quiet = false;
};

KeyValueConfig load_config(const GlobalOptions& opts) {
    if (!std::filesystem::exists(opts.config_path)) {
        throw config_error("config file not found: '" + opts.config_path + "'");
    }
    KeyValueConfig cfg = KeyValueConfig::parse_file(opts.config_path);
    if (opts.seed_override) cfg.set("seed", std::to_string(*opts.seed_override));
    if (opts.threads_override) cfg.set("threads", std::to_string(*opts.threads_override));
    if (!cfg.has("threads")) cfg.set("threads", std::to_string(par::max_threads()));
    if (!opts.out_dir.empty()) cfg.set("out", opts.out_dir);
    return cfg;
}

std::string out_dir_of(const KeyValueConfig& cfg) { return cfg.get_string_or("out", "."); }

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw config_error("cannot write output file '" + path + "'");
    f << content;
}

void write_json_file(const std::string& path, const nlohmann::ordered_json& doc) {
    write_text(path, doc.dump(2) + "\n");
}

nlohmann::ordered_json echo_of(const KeyValueConfig& cfg) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : cfg.values()) j[k] = v;
    return j;
}

void announce(const GlobalOptions& opts, const KeyValueConfig& resolved,
              const std::vector<std::string>& files) {
    if (opts.quiet) return;
    std::cout << "resolved config:\n" << resolved.canonical();
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
}

// ---------------------------------------------------------------------------
// simulate: one path to CSV
// ---------------------------------------------------------------------------
int run_simulate(const GlobalOptions& opts) {
    KeyValueConfig cfg = load_config(opts);
    const CoefficientFunction f =
        CoefficientFunction::parse(cfg.get_string_or("f", "const(0.5)"));
    const InnovationDist dist = InnovationDist::parse(cfg.get_string_or("dist", "gamma(1,1)"));
    const std::size_t n = static_cast<std::size_t>(cfg.get_u64("n"));
    if (n < 2) throw config_error("config key 'n' must be at least 2");
    const std::uint64_t seed = cfg.get_u64_or("seed", 1);

    const Path path = simulate_path(f, dist, n, seed);

    KeyValueConfig resolved;
    resolved.set("kind", "simulate");
    resolved.set("f", f.label);
    resolved.set("dist", dist.to_string());
    resolved.set("n", std::to_string(n));
    resolved.set("seed", std::to_string(seed));
    resolved.set("derived.burnin", std::to_string(path.prehistory.size() - 1));
    resolved.set("derived.rho", format_g17(f.rho));

    const std::string base =
        (std::filesystem::path(out_dir_of(cfg)) / ("simulate_" + config_hash(resolved))).string();
    std::ostringstream csv;
    write_path_csv(path, csv);
    std::filesystem::create_directories(out_dir_of(cfg));
    write_text(base + ".csv", csv.str());

    nlohmann::ordered_json doc;
    doc["kind"] = "simulate";
    doc["config"] = echo_of(resolved);
    write_json_file(base + ".json", doc);
    announce(opts, resolved, {base + ".csv", base + ".json"});
    return 0;
}

// ---------------------------------------------------------------------------
// estimate: curve over a grid to CSV
// ---------------------------------------------------------------------------
Path obtain_path(const KeyValueConfig& cfg, KeyValueConfig& resolved) {
    if (cfg.has("input")) {
        const std::string input = cfg.get_string("input");
        std::ifstream f(input);
        if (!f) throw config_error("cannot read input path CSV '" + input + "'");
        resolved.set("input", input);
        return read_path_csv(f);
    }
    const CoefficientFunction f =
        CoefficientFunction::parse(cfg.get_string_or("f", "const(0.5)"));
    const InnovationDist dist = InnovationDist::parse(cfg.get_string_or("dist", "gamma(1,1)"));
    const std::size_t n = static_cast<std::size_t>(cfg.get_u64("n"));
    if (n < 2) throw config_error("config key 'n' must be at least 2");
    const std::uint64_t seed = cfg.get_u64_or("seed", 1);
    resolved.set("f", f.label);
    resolved.set("dist", dist.to_string());
    resolved.set("n", std::to_string(n));
    resolved.set("seed", std::to_string(seed));
    return simulate_path(f, dist, n, seed);
}

double required_shape(const KeyValueConfig& cfg) {
    double a;
    if (cfg.has("a")) {
        a = cfg.get_double("a");
    } else if (cfg.has("dist")) {
        a = InnovationDist::parse(cfg.get_string("dist")).shape;
    } else {
        throw config_error("missing required config key 'a' (decay shape)");
    }
    if (!(a > 0.0)) throw config_error("config key 'a' must be positive");
    return a;
}

int run_estimate(const GlobalOptions& opts) {
    KeyValueConfig cfg = load_config(opts);
    KeyValueConfig resolved;
    resolved.set("kind", "estimate");
    const Path path = obtain_path(cfg, resolved);
    const double a = required_shape(cfg);
    const double beta = cfg.get_double_or("beta", 1.0);
    if (!(beta > 0.0)) throw config_error("config key 'beta' must be positive");
    const std::optional<double> h_override = cfg.get_double_opt("h");
    if (h_override && !(*h_override > 0.0)) {
        throw config_error("config key 'h' must be positive");
    }
    const int threads = static_cast<int>(cfg.get_u64_or("threads", 1));

    std::vector<double> grid;
    if (cfg.has("grid")) {
        grid = cfg.get_double_list("grid");
        for (double x : grid) {
            if (x < 0.0 || x > 1.0) throw config_error("config key 'grid' must lie in [0,1]");
        }
    } else {
        const std::size_t points = static_cast<std::size_t>(cfg.get_u64_or("grid_points", 21));
        if (points < 2) throw config_error("config key 'grid_points' must be at least 2");
        for (std::size_t i = 0; i < points; ++i) {
            grid.push_back(static_cast<double>(i) / static_cast<double>(points - 1));
        }
    }

    const RegressionSample sample = regression_transform(path);
    const std::vector<CurvePoint> curve =
        estimate_curve(sample, grid, a, beta, h_override, threads);

    resolved.set("a", format_g17(a));
    resolved.set("beta", format_g17(beta));
    resolved.set("threads", std::to_string(threads));
    resolved.set("derived.degree", std::to_string(poly_degree(beta)));
    resolved.set("derived.h", format_g17(curve.front().h));
    {
        std::ostringstream os_n, os_tau, os_x;
        for (std::size_t i = 0; i < curve.size(); ++i) {
            os_x << (i ? "," : "") << format_g17(curve[i].x);
            os_n << (i ? "," : "") << curve[i].n_local;
            os_tau << (i ? "," : "")
                   << format_g17(std::pow(std::log(static_cast<double>(curve[i].n_local)), 2.0));
        }
        resolved.set("derived.grid", os_x.str());
        resolved.set("derived.n_local", os_n.str());
        resolved.set("derived.tau", os_tau.str());
    }

    const std::string base =
        (std::filesystem::path(out_dir_of(cfg)) / ("estimate_" + config_hash(resolved))).string();
    std::ostringstream csv;
    write_curve_csv(curve, csv);
    std::filesystem::create_directories(out_dir_of(cfg));
    write_text(base + ".csv", csv.str());
    nlohmann::ordered_json doc;
    doc["kind"] = "estimate";
    doc["config"] = echo_of(resolved);
    write_json_file(base + ".json", doc);
    announce(opts, resolved, {base + ".csv", base + ".json"});
    return 0;
}

// ---------------------------------------------------------------------------
// predict: one-step-ahead forecast to JSON
// ---------------------------------------------------------------------------
int run_predict(const GlobalOptions& opts) {
    KeyValueConfig cfg = load_config(opts);
    KeyValueConfig resolved;
    resolved.set("kind", "predict");
    const Path path = obtain_path(cfg, resolved);
    if (path.N < 3) throw config_error("config key 'n' must be at least 3 for prediction");
    const double a = required_shape(cfg);
    const double beta = cfg.get_double_or("beta", 1.0);
    if (!(beta > 0.0)) throw config_error("config key 'beta' must be positive");
    const std::optional<double> h_override = cfg.get_double_opt("h");
    const int threads = static_cast<int>(cfg.get_u64_or("threads", 1));

    const RegressionSample sample = regression_transform(path);
    const std::vector<double> grid = prediction_grid(path.N);
    const std::vector<CurvePoint> curve =
        estimate_curve(sample, grid, a, beta, h_override, threads);
    const PredictionResult pred = predict_next(path, curve);

    resolved.set("a", format_g17(a));
    resolved.set("beta", format_g17(beta));
    resolved.set("threads", std::to_string(threads));
    resolved.set("derived.degree", std::to_string(poly_degree(beta)));
    resolved.set("derived.h", format_g17(curve.front().h));
    resolved.set("derived.f_hat_at_1", format_g17(curve.back().f_hat_truncated));

    nlohmann::ordered_json doc;
    doc["kind"] = "predict";
    doc["config"] = echo_of(resolved);
    doc["x_hat_next"] = pred.x_hat_next;
    doc["residual_mean"] = pred.residual_mean;
    doc["f_hat_at_1"] = curve.back().f_hat_truncated;
    doc["n"] = path.N;

    const std::string base =
        (std::filesystem::path(out_dir_of(cfg)) / ("predict_" + config_hash(resolved))).string();
    std::filesystem::create_directories(out_dir_of(cfg));
    write_json_file(base + ".json", doc);
    announce(opts, resolved, {base + ".json"});
    return 0;
}

int run_study(const GlobalOptions& opts,
              Report (*study)(const KeyValueConfig&)) {
    KeyValueConfig cfg = load_config(opts);
    Report report = study(cfg);
    const auto [csv_path, json_path] = report.write(out_dir_of(cfg));
    announce(opts, report.resolved, {csv_path, json_path});
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"time-varying one-sided autoregression: simulation, estimation, experiments"};
    app.require_subcommand(1);

    GlobalOptions opts;
    app.add_option("--config", opts.config_path, "path to key = value config file")
        ->required();
    app.add_option("--out", opts.out_dir, "output directory (default from config, else '.')");
    std::uint64_t seed_val = 0;
    auto* seed_opt = app.add_option("--seed", seed_val, "override config seed");
    int threads_val = 0;
    auto* threads_opt = app.add_option("--threads", threads_val, "override thread count");
    app.add_flag("--quiet", opts.quiet, "suppress stdout chatter");

    struct Entry {
        const char* name;
        const char* help;
        int (*fn)(const GlobalOptions&);
    };
    const std::vector<Entry> entries = {
        {"simulate", "simulate one path and write it as CSV", run_simulate},
        {"estimate", "estimate the coefficient curve on a grid", run_estimate},
        {"predict", "one-step-ahead prediction", run_predict},
    };
    for (const Entry& e : entries) {
        app.add_subcommand(e.name, e.help)->fallthrough();
    }
    const std::vector<std::pair<const char*, Report (*)(const KeyValueConfig&)>> study_entries = {
        {"rate-study", studies::rate_study},
        {"concentration", studies::concentration_study},
        {"prediction-study", studies::prediction_study},
        {"sharpness", studies::sharpness_study},
        {"pair-check", studies::pair_minimum_study},
        {"lower-bound", studies::lower_bound_battery},
    };
    for (const auto& [name, fn] : study_entries) {
        app.add_subcommand(name, "Monte Carlo study")->fallthrough();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    if (seed_opt->count() > 0) opts.seed_override = seed_val;
    if (threads_opt->count() > 0) opts.threads_override = threads_val;

    try {
        for (const Entry& e : entries) {
            if (app.got_subcommand(e.name)) return e.fn(opts);
        }
        for (const auto& [name, fn] : study_entries) {
            if (app.got_subcommand(name)) return run_study(opts, fn);
        }
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace tvar::cli
