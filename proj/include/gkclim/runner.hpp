#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gkclim/coupled.hpp"
#include "gkclim/ode.hpp"
#include "gkclim/parameters.hpp"
#include "gkclim/sensitivity.hpp"

namespace gkclim {

/// Calls fn(i) for i in [0, n) on `workers` threads (0 = hardware
/// concurrency). Indices are handed out in order; the first exception is rethrown.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

/// Receives every run's full trajectory (from worker threads) when set.
using TrajectorySink = std::function<void(std::size_t index, const Trajectory& traj)>;

struct ScenarioResult {
    Trajectory trajectory;
    coupled::Outcome outcome;
};

/// Throws ConfigError on an invalid configuration.
ScenarioResult run_scenario(const ExperimentConfig& cfg);

struct SweepRecord {
    std::size_t index = 0;
    std::vector<double> values;  // one per SweepResult::columns
    coupled::Outcome outcome;
    Termination termination = Termination::Completed;
};

struct SweepResult {
    std::string kind;  // "sobol" or "basin"
    Variant variant = Variant::Reduced;
    std::vector<std::string> columns;
    std::vector<Interval> ranges;
    std::vector<SweepRecord> records;

    std::size_t count(coupled::Category c) const;
    double fraction(coupled::Category c) const;
};

/// Sobol points over cfg.sweep_axes, one run per point (cfg.samples points
/// after cfg.sobol_skip), classified by end values.
SweepResult run_sobol_sweep(const ExperimentConfig& cfg, const TrajectorySink& sink = {});

/// resolution^3 grid of initial (lambda, omega, d) for every markup in
/// cfg.basin, with inflation relaxation and money illusion fixed. Columns:
/// markup, lambda0, omega0, d0.
SweepResult run_basin_grid(const ExperimentConfig& cfg, const TrajectorySink& sink = {});

/// Variables recorded per year in Monte Carlo runs.
std::vector<std::string> mc_variables(Variant v);

struct McRun {
    std::size_t index = 0;
    std::vector<double> draws;
    coupled::Outcome outcome;
    Termination termination = Termination::Completed;
    /// Annual values, years x variables; NaN after an early stop.
    std::vector<double> series;
};

struct QuantileRow {
    std::string variable;
    int year = 0;
    double median = 0;
    double lower = 0;  // 2.5 %
    double upper = 0;  // 97.5 %
    std::size_t n_finite = 0;
};

struct McSummary {
    std::size_t n_runs = 0;
    double readout_year = 2100;
    double median_temperature = 0;
    double frac_temperature_below_2 = 0;
    double frac_debt_below_2_7 = 0;
    double frac_both = 0;
    double frac_employment_good = 0;
    std::vector<QuantileRow> quantiles;
};

struct McResult {
    Variant variant = Variant::Reduced;
    std::vector<std::string> parameters;
    std::vector<std::string> variables;
    std::vector<int> years;
    std::vector<McRun> runs;
    McSummary summary;
    sensitivity::SensitivityReport report;

    /// Value of `variable` in `year` for run `run`.
    double value(std::size_t run, std::string_view variable, int year) const;
};

/// cfg.samples draws from the fitted distributions (per run generator from
/// (seed, index)), fixed initial conditions, annual series, summary and
/// sensitivity report.
McResult run_monte_carlo(const ExperimentConfig& cfg, const TrajectorySink& sink = {});

/// Linear-interpolation quantile of the finite entries (type 7); NaN if none.
double quantile(std::vector<double> values, double q);

/// Medians, 2.5/97.5 % bands and the headline fractions. Runs with missing
/// readout values count in the denominators but never as "below".
McSummary summarize_runs(const std::vector<std::string>& variables, const std::vector<int>& years,
                         const std::vector<std::vector<double>>& series,
                         double readout_year, double employment_threshold);

}  // namespace gkclim
