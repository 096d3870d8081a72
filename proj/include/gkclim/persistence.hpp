#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gkclim/ode.hpp"
#include "gkclim/parameters.hpp"
#include "gkclim/runner.hpp"

namespace gkclim {

namespace fs = std::filesystem;

/// Columns: year, the state columns, then the derived columns not already written.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::vector<std::string>& state_names);
void write_trajectory_csv(const fs::path& path, const Trajectory& traj,
                          const std::vector<std::string>& state_names);

/// State column names for a variant's trajectories.
std::vector<std::string> state_columns(Variant v);

/// config.toml, trajectory.csv, metadata.json.
void save_scenario(const fs::path& dir, const ExperimentConfig& cfg, const ScenarioResult& r);

/// config.toml, outcomes.csv, metadata.json.
void save_sweep(const fs::path& dir, const ExperimentConfig& cfg, const SweepResult& r);

/// config.toml, draws.csv, outcomes.csv, series.csv, summary.csv, report.json, report.csv.
void save_monte_carlo(const fs::path& dir, const ExperimentConfig& cfg, const McResult& r);

/// Headline numbers and sensitivity results as JSON.
std::string mc_report_json(const ExperimentConfig& cfg, const McSummary& s,
                           const sensitivity::SensitivityReport& report);

/// variable,year,median,p2_5,p97_5,n_finite
std::string summary_csv(const McSummary& s);

struct DirectorySummary {
    ExperimentConfig config;
    McSummary summary;
    sensitivity::SensitivityReport report;
};

/// Recomputes the summary and sensitivity tables from the per-run files of a
/// Monte Carlo directory and rewrites summary.csv, report.json and report.csv.
/// Throws std::runtime_error if the directory holds no runs.
DirectorySummary summarize_directory(const fs::path& dir);

}  // namespace gkclim
