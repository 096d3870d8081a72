#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "gkclim/config.hpp"
#include "gkclim/errors.hpp"
#include "gkclim/persistence.hpp"
#include "gkclim/runner.hpp"

using namespace gkclim;
namespace fs = std::filesystem;

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("gkclim_test_" + name);
    fs::remove_all(dir);
    return dir;
}

ExperimentConfig small_mc(std::size_t n) {
    ExperimentConfig cfg;
    cfg.variant = Variant::Reduced;
    cfg.samples = n;
    cfg.steps_per_year = 4;
    cfg.seed = 5;
    cfg.workers = 1;
    cfg.ratio_init = RatioInit{0.9, 0.9, 0.3};
    return cfg;
}

}  // namespace

TEST_SUITE("runner") {

TEST_CASE("type 7 quantiles") {
    CHECK(quantile({1, 2, 3, 4}, 0.5) == 2.5);
    CHECK(quantile({4, 1, 3, 2}, 0.25) == doctest::Approx(1.75));
    CHECK(quantile({5}, 0.975) == 5);
    CHECK(quantile({1, kNaN, 3}, 0.5) == 2);
    CHECK(std::isnan(quantile({kNaN}, 0.5)));
    CHECK(std::isnan(quantile({}, 0.5)));
    CHECK(quantile({0, 10}, 0.025) == doctest::Approx(0.25));
}

TEST_CASE("headline fractions") {
    const std::vector<std::string> vars{"lambda", "omega", "d", "T"};
    const std::vector<int> years{2099, 2100};
    std::vector<std::vector<double>> series{
        {0, 0, 0, 0, 0.9, 0.6, 1.0, 1.5},
        {0, 0, 0, 0, 0.3, 0.6, 3.0, 2.5},
        {0, 0, 0, 0, 0.5, 0.6, 2.0, 3.0},
        {0, 0, 0, 0, kNaN, kNaN, kNaN, kNaN},
    };
    const auto s = summarize_runs(vars, years, series, 2100, 0.4);
    CHECK(s.n_runs == 4);
    CHECK(s.median_temperature == 2.5);
    CHECK(s.frac_temperature_below_2 == 0.25);
    CHECK(s.frac_debt_below_2_7 == 0.5);
    CHECK(s.frac_both == 0.25);
    CHECK(s.frac_employment_good == 0.5);
    REQUIRE(s.quantiles.size() == 8);
    CHECK(s.quantiles[7].variable == "T");
    CHECK(s.quantiles[7].year == 2100);
    CHECK(s.quantiles[7].n_finite == 3);
    CHECK_THROWS(summarize_runs(vars, years, {}, 2100, 0.4));

    const auto single = summarize_runs(vars, years, {series[0]}, 2100, 0.4);
    CHECK(single.median_temperature == 1.5);
    CHECK(single.quantiles[7].lower == 1.5);
    CHECK(single.quantiles[7].upper == 1.5);
}

TEST_CASE("scenarios") {
    ExperimentConfig cfg;
    cfg.ratio_init = RatioInit{0.9, 0.9, 0.3};
    cfg.steps_per_year = 4;
    const auto r = run_scenario(cfg);
    CHECK(r.outcome.category == coupled::Category::Good);
    CHECK(r.trajectory.times.front() == 2016);
    CHECK(r.trajectory.times.back() == doctest::Approx(2196));

    ExperimentConfig full;
    full.variant = Variant::Full;
    full.horizon_years = 90;
    full.steps_per_year = 2;
    const auto f = run_scenario(full);
    CHECK(f.trajectory.termination == Termination::Completed);
    CHECK(f.trajectory.times.back() >= 2100);
    CHECK(f.trajectory.has_derived("T"));
    CHECK(std::isfinite(f.outcome.temperature));

    ExperimentConfig bad;
    bad.horizon_years = 0;
    CHECK_THROWS_AS(run_scenario(bad), ConfigError);
}

TEST_CASE("sweeps and grids") {
    ExperimentConfig cfg;
    cfg.samples = 1;
    cfg.steps_per_year = 2;
    cfg.horizon_years = 40;
    cfg.workers = 1;
    const auto one = run_sobol_sweep(cfg);
    REQUIRE(one.records.size() == 1);
    // The first point after the origin sits at the box centre.
    CHECK(one.records[0].values[0] == doctest::Approx(0.425));
    CHECK(one.records[0].values[1] == doctest::Approx(1.6));
    CHECK(one.records[0].values[2] == doctest::Approx(0.5));

    cfg.samples = 12;
    const auto serial = run_sobol_sweep(cfg);
    cfg.workers = 3;
    const auto parallel = run_sobol_sweep(cfg);
    REQUIRE(serial.records.size() == parallel.records.size());
    for (std::size_t i = 0; i < serial.records.size(); ++i) {
        CHECK(serial.records[i].index == i);
        CHECK(serial.records[i].values == parallel.records[i].values);
        CHECK(serial.records[i].outcome.employment == parallel.records[i].outcome.employment);
        CHECK(serial.records[i].outcome.category == parallel.records[i].outcome.category);
    }
    std::size_t total = 0;
    for (auto c : {coupled::Category::Good, coupled::Category::OutsideBounds, coupled::Category::Bad,
                   coupled::Category::Divergent})
        total += serial.count(c);
    CHECK(total == 12);

    ExperimentConfig grid;
    grid.basin.resolution = 2;
    grid.basin.markups = {1.3, 1.875};
    grid.horizon_years = 30;
    grid.steps_per_year = 2;
    const auto g = run_basin_grid(grid);
    REQUIRE(g.records.size() == 16);
    CHECK(g.columns == std::vector<std::string>{"markup", "lambda0", "omega0", "d0"});
    CHECK(g.records[0].values == std::vector<double>{1.3, 0.2, 0.2, 0.1});
    CHECK(g.records[1].values == std::vector<double>{1.3, 0.2, 0.2, 2.7});
    CHECK(g.records[15].values == std::vector<double>{1.875, 0.99, 0.99, 2.7});
}

TEST_CASE("Monte Carlo runs, persistence and summaries") {
    auto cfg = small_mc(6);
    const auto r = run_monte_carlo(cfg);
    REQUIRE(r.runs.size() == 6);
    CHECK(r.variables == std::vector<std::string>{"lambda", "omega", "d"});
    CHECK(r.years.front() == 2016);
    CHECK(r.years.back() == 2200);
    CHECK(r.parameters.size() == 4);
    CHECK(r.summary.n_runs == 6);
    CHECK(std::isnan(r.summary.median_temperature));
    CHECK(r.report.n_total == 6);

    cfg.workers = 3;
    const auto again = run_monte_carlo(cfg);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(again.runs[i].draws == r.runs[i].draws);
        CHECK(again.runs[i].series.size() == r.runs[i].series.size());
        for (std::size_t k = 0; k < r.runs[i].series.size(); ++k) {
            const double a = r.runs[i].series[k], b = again.runs[i].series[k];
            CHECK(((std::isnan(a) && std::isnan(b)) || a == b));
        }
    }

    const auto dir = scratch("mc");
    save_monte_carlo(dir, cfg, r);
    for (const char* f : {"config.toml", "draws.csv", "outcomes.csv", "series.csv", "summary.csv",
                          "report.json", "report.csv"})
        CHECK(fs::exists(dir / f));
    const auto summary_before = slurp(dir / "summary.csv");
    const auto report_before = slurp(dir / "report.json");
    const auto s = summarize_directory(dir);
    CHECK(s.summary.frac_employment_good == r.summary.frac_employment_good);
    CHECK(s.summary.frac_debt_below_2_7 == r.summary.frac_debt_below_2_7);
    CHECK(s.report.n_good == r.report.n_good);
    CHECK(slurp(dir / "summary.csv") == summary_before);
    CHECK(slurp(dir / "report.json") == report_before);
    summarize_directory(dir);
    CHECK(slurp(dir / "report.json") == report_before);

    const auto dir2 = scratch("mc2");
    save_monte_carlo(dir2, cfg, again);
    for (const char* f : {"draws.csv", "series.csv", "summary.csv", "report.json", "report.csv"})
        CHECK(slurp(dir / f) == slurp(dir2 / f));

    const auto empty = scratch("empty");
    fs::create_directories(empty);
    CHECK_THROWS(summarize_directory(empty));
    fs::remove_all(dir);
    fs::remove_all(dir2);
    fs::remove_all(empty);
}

TEST_CASE("full-model Monte Carlo tracks temperature") {
    auto cfg = small_mc(2);
    cfg.variant = Variant::Full;
    cfg.ratio_init.reset();
    cfg.steps_per_year = 2;
    cfg.monte_carlo.horizon_years = 84;
    const auto r = run_monte_carlo(cfg);
    CHECK(r.variables.back() == "T");
    CHECK(r.parameters.size() == 6);
    for (std::size_t i = 0; i < 2; ++i) {
        const double t = r.value(i, "T", 2100);
        if (r.runs[i].termination == Termination::Completed) CHECK(t > 0.85);
    }
    CHECK(r.report.logistic_status != "ok");
}

TEST_CASE("trajectory files") {
    ExperimentConfig cfg;
    cfg.horizon_years = 2;
    cfg.steps_per_year = 1;
    cfg.ratio_init = RatioInit{0.9, 0.9, 0.3};
    const auto r = run_scenario(cfg);
    std::ostringstream out;
    write_trajectory_csv(out, r.trajectory, state_columns(cfg.variant));
    const auto text = out.str();
    CHECK(text.rfind("year,lambda,omega,d,N,pi\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
    const auto dir = scratch("scenario");
    save_scenario(dir, cfg, r);
    CHECK(fs::exists(dir / "trajectory.csv"));
    CHECK(fs::exists(dir / "metadata.json"));
    const auto reloaded = load_config(dir / "config.toml");
    CHECK(to_toml(reloaded) == to_toml(cfg));
    fs::remove_all(dir);
}

}
