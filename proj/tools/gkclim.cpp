#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gkclim/config.hpp"
#include "gkclim/errors.hpp"
#include "gkclim/persistence.hpp"
#include "gkclim/runner.hpp"

namespace {

using namespace gkclim;

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n;
    std::string variant;
    std::string out;
    std::vector<std::string> params;
    bool save_trajectories = false;
    std::optional<unsigned> workers;
};

void add_common(CLI::App* cmd, CommonOptions& o, const std::string& default_out) {
    o.out = default_out;
    cmd->add_option("--config", o.config, "experiment TOML file");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--n", o.n, "number of samples");
    cmd->add_option("--variant", o.variant, "reduced | full-nofb | full");
    cmd->add_option("--out", o.out, "output directory")->capture_default_str();
    cmd->add_option("--param", o.params, "override, name=value (repeatable)");
    cmd->add_flag("--save-trajectories", o.save_trajectories, "write every run's trajectory");
    cmd->add_option("--workers", o.workers, "worker threads (0 = all cores)");
}

ExperimentConfig build_config(const CommonOptions& o) {
    ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
    if (!o.variant.empty()) cfg.variant = parse_variant(o.variant);
    if (o.seed) cfg.seed = *o.seed;
    if (o.n) cfg.samples = *o.n;
    if (o.save_trajectories) cfg.save_trajectories = true;
    if (o.workers) cfg.workers = *o.workers;
    for (const auto& p : o.params) apply_override(cfg, p);
    require_valid(cfg);
    return cfg;
}

TrajectorySink trajectory_sink(const ExperimentConfig& cfg, const fs::path& out) {
    if (!cfg.save_trajectories) return {};
    fs::create_directories(out / "trajectories");
    const auto names = state_columns(cfg.variant);
    return [dir = out / "trajectories", names](std::size_t i, const Trajectory& traj) {
        char name[32];
        std::snprintf(name, sizeof name, "run_%06zu.csv", i);
        write_trajectory_csv(dir / name, traj, names);
    };
}

void print_counts(const SweepResult& r) {
    using coupled::Category;
    std::cout << "records " << r.records.size();
    for (auto c : {Category::Good, Category::OutsideBounds, Category::Bad, Category::Divergent})
        std::cout << "  " << coupled::to_string(c) << ' ' << r.count(c);
    std::cout << '\n';
}

void print_headline(const McSummary& s, const sensitivity::SensitivityReport& r) {
    std::cout << "runs " << s.n_runs << "  readout " << s.readout_year << '\n'
              << "median T " << s.median_temperature << '\n'
              << "fraction T<2 " << s.frac_temperature_below_2 << '\n'
              << "fraction d<2.7 " << s.frac_debt_below_2_7 << '\n'
              << "fraction both " << s.frac_both << '\n'
              << "fraction lambda>threshold " << s.frac_employment_good << '\n'
              << "logistic " << r.logistic_status << "  prcc " << r.prcc_status << '\n';
    for (const auto& p : r.parameters)
        std::cout << "  " << p.parameter << "  coef " << p.logit_coef << "  se " << p.std_err
                  << "  prcc " << p.prcc << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coupled macroeconomy / climate model experiments"};
    app.require_subcommand(1);

    CommonOptions scenario_opts, sweep_opts, basin_opts, mc_opts, dump_opts;
    auto* scenario = app.add_subcommand("scenario", "integrate one configuration");
    add_common(scenario, scenario_opts, "out/scenario");
    auto* sweep = app.add_subcommand("sweep", "Sobol sweep over parameter ranges");
    add_common(sweep, sweep_opts, "out/sweep");
    auto* basin = app.add_subcommand("basin", "grid of initial ratios per markup");
    add_common(basin, basin_opts, "out/basin");
    std::optional<int> resolution;
    basin->add_option("--resolution", resolution, "grid points per axis");
    auto* mc = app.add_subcommand("mc", "Monte Carlo over the fitted parameter distributions");
    add_common(mc, mc_opts, "out/mc");
    auto* summarize = app.add_subcommand("summarize", "recompute tables of a Monte Carlo directory");
    std::string summarize_dir;
    summarize->add_option("dir", summarize_dir, "run directory")->required();
    auto* params = app.add_subcommand("params", "parameter utilities");
    auto* dump = params->add_subcommand("dump", "print effective parameters as JSON");
    add_common(dump, dump_opts, "");
    params->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*scenario) {
            const auto cfg = build_config(scenario_opts);
            const auto r = run_scenario(cfg);
            save_scenario(scenario_opts.out, cfg, r);
            std::cout << "outcome " << coupled::to_string(r.outcome.category) << "  year "
                      << r.outcome.year << "  lambda " << r.outcome.employment << "  omega "
                      << r.outcome.wage_share << "  d " << r.outcome.debt_ratio << '\n';
        } else if (*sweep) {
            const auto cfg = build_config(sweep_opts);
            const auto r = run_sobol_sweep(cfg, trajectory_sink(cfg, sweep_opts.out));
            save_sweep(sweep_opts.out, cfg, r);
            print_counts(r);
        } else if (*basin) {
            auto cfg = build_config(basin_opts);
            if (resolution) cfg.basin.resolution = *resolution;
            require_valid(cfg);
            const auto r = run_basin_grid(cfg, trajectory_sink(cfg, basin_opts.out));
            save_sweep(basin_opts.out, cfg, r);
            print_counts(r);
        } else if (*mc) {
            auto cfg = build_config(mc_opts);
            const auto r = run_monte_carlo(cfg, trajectory_sink(cfg, mc_opts.out));
            save_monte_carlo(mc_opts.out, cfg, r);
            print_headline(r.summary, r.report);
        } else if (*summarize) {
            const auto s = summarize_directory(summarize_dir);
            print_headline(s.summary, s.report);
        } else if (*dump) {
            std::cout << params_json(build_config(dump_opts)) << '\n';
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
