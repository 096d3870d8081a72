#include "gkclim/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gkclim/config.hpp"
#include "gkclim/coupled.hpp"
#include "gkclim/toml.hpp"

namespace gkclim {

using json = nlohmann::ordered_json;

namespace {

std::string num(double v) { return toml::format_double(v); }

json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string outcome_cells(const coupled::Outcome& o, Termination t) {
    std::ostringstream s;
    s << coupled::to_string(o.category) << ',' << to_string(t) << ',' << num(o.year) << ','
      << num(o.employment) << ',' << num(o.wage_share) << ',' << num(o.debt_ratio) << ','
      << num(o.temperature);
    return s.str();
}

constexpr const char* kOutcomeHeader = "category,termination,end_year,lambda,omega,d,T";

json experiment_metadata(const ExperimentConfig& cfg, std::string_view kind) {
    return {{"experiment", kind},
            {"variant", to_string(cfg.variant)},
            {"seed", cfg.seed},
            {"samples", cfg.samples},
            {"horizon_years",
             kind == "monte_carlo" ? cfg.monte_carlo.horizon_years : cfg.horizon_years},
            {"steps_per_year", cfg.steps_per_year},
            {"rtol", cfg.solver.rtol},
            {"atol", cfg.solver.atol}};
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw std::runtime_error("CSV column '" + std::string(name) + "' missing");
    }
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + " is empty");
    t.header = split(line);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != t.header.size())
            throw std::runtime_error(path.string() + ": ragged row");
        t.rows.push_back(std::move(cells));
    }
    return t;
}

double parse_number(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw std::runtime_error("bad number '" + s + "'");
    return v;
}

}  // namespace

std::vector<std::string> state_columns(Variant v) {
    if (v == Variant::Reduced) return {"lambda", "omega", "d", "N"};
    const auto names = coupled::state_names();
    return {names.begin(), names.end()};
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::vector<std::string>& state_names) {
    // Derived columns that repeat a state column are written once.
    std::vector<std::size_t> derived;
    for (std::size_t j = 0; j < traj.derived_names.size(); ++j)
        if (std::find(state_names.begin(), state_names.end(), traj.derived_names[j]) ==
            state_names.end())
            derived.push_back(j);
    out << "year";
    for (const auto& n : state_names) out << ',' << n;
    for (auto j : derived) out << ',' << traj.derived_names[j];
    out << '\n';
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out << num(traj.times[i]);
        for (std::size_t j = 0; j < traj.dimension; ++j) out << ',' << num(traj.state(i, j));
        for (auto j : derived) out << ',' << num(traj.derived_value(i, j));
        out << '\n';
    }
}

void write_trajectory_csv(const fs::path& path, const Trajectory& traj,
                          const std::vector<std::string>& state_names) {
    auto out = open_out(path);
    write_trajectory_csv(out, traj, state_names);
}

void save_scenario(const fs::path& dir, const ExperimentConfig& cfg, const ScenarioResult& r) {
    fs::create_directories(dir);
    write_text(dir / "config.toml", to_toml(cfg));
    write_trajectory_csv(dir / "trajectory.csv", r.trajectory, state_columns(cfg.variant));
    json meta = experiment_metadata(cfg, "scenario");
    meta["termination"] = to_string(r.trajectory.termination);
    meta["termination_time"] = r.trajectory.termination_time;
    meta["outcome"] = {{"category", coupled::to_string(r.outcome.category)},
                       {"year", r.outcome.year},
                       {"lambda", json_number(r.outcome.employment)},
                       {"omega", json_number(r.outcome.wage_share)},
                       {"d", json_number(r.outcome.debt_ratio)},
                       {"T", json_number(r.outcome.temperature)}};
    meta["steps"] = {{"accepted", r.trajectory.stats.accepted},
                     {"rejected", r.trajectory.stats.rejected},
                     {"evaluations", r.trajectory.stats.evaluations}};
    write_text(dir / "metadata.json", meta.dump(2) + "\n");
}

void save_sweep(const fs::path& dir, const ExperimentConfig& cfg, const SweepResult& r) {
    fs::create_directories(dir);
    write_text(dir / "config.toml", to_toml(cfg));
    {
        auto out = open_out(dir / "outcomes.csv");
        out << "index";
        for (const auto& c : r.columns) out << ',' << c;
        out << ',' << kOutcomeHeader << '\n';
        for (const auto& rec : r.records) {
            out << rec.index;
            for (double v : rec.values) out << ',' << num(v);
            out << ',' << outcome_cells(rec.outcome, rec.termination) << '\n';
        }
    }
    json meta = experiment_metadata(cfg, r.kind);
    meta["records"] = r.records.size();
    json ranges = json::array();
    for (std::size_t i = 0; i < r.ranges.size() && i < r.columns.size(); ++i)
        ranges.push_back({{"column", r.columns[i]},
                          {"lower", r.ranges[i].lower},
                          {"upper", r.ranges[i].upper}});
    meta["ranges"] = ranges;
    json counts;
    for (auto c : {coupled::Category::Good, coupled::Category::OutsideBounds, coupled::Category::Bad,
                   coupled::Category::Divergent})
        counts[coupled::to_string(c)] = r.count(c);
    meta["counts"] = counts;
    write_text(dir / "metadata.json", meta.dump(2) + "\n");
}

std::string summary_csv(const McSummary& s) {
    std::ostringstream out;
    out << "variable,year,median,p2_5,p97_5,n_finite\n";
    for (const auto& q : s.quantiles)
        out << q.variable << ',' << q.year << ',' << num(q.median) << ',' << num(q.lower) << ','
            << num(q.upper) << ',' << q.n_finite << '\n';
    return out.str();
}

std::string mc_report_json(const ExperimentConfig& cfg, const McSummary& s,
                           const sensitivity::SensitivityReport& report) {
    json j = experiment_metadata(cfg, "monte_carlo");
    j["n_runs"] = s.n_runs;
    j["readout_year"] = s.readout_year;
    j["headline"] = {{"median_T", json_number(s.median_temperature)},
                     {"frac_T_below_2", json_number(s.frac_temperature_below_2)},
                     {"frac_d_below_2_7", json_number(s.frac_debt_below_2_7)},
                     {"frac_both", json_number(s.frac_both)},
                     {"frac_lambda_above_threshold", json_number(s.frac_employment_good)}};
    j["sensitivity"] = json::parse(sensitivity::report_json(report));
    return j.dump(2) + "\n";
}

void save_monte_carlo(const fs::path& dir, const ExperimentConfig& cfg, const McResult& r) {
    fs::create_directories(dir);
    write_text(dir / "config.toml", to_toml(cfg));
    {
        auto out = open_out(dir / "draws.csv");
        out << "run";
        for (const auto& p : r.parameters) out << ',' << p;
        out << '\n';
        for (const auto& run : r.runs) {
            out << run.index;
            for (double v : run.draws) out << ',' << num(v);
            out << '\n';
        }
    }
    {
        auto out = open_out(dir / "outcomes.csv");
        out << "run," << kOutcomeHeader << '\n';
        for (const auto& run : r.runs)
            out << run.index << ',' << outcome_cells(run.outcome, run.termination) << '\n';
    }
    {
        auto out = open_out(dir / "series.csv");
        out << "run,year";
        for (const auto& v : r.variables) out << ',' << v;
        out << '\n';
        for (const auto& run : r.runs)
            for (std::size_t yi = 0; yi < r.years.size(); ++yi) {
                out << run.index << ',' << r.years[yi];
                for (std::size_t vi = 0; vi < r.variables.size(); ++vi)
                    out << ',' << num(run.series[yi * r.variables.size() + vi]);
                out << '\n';
            }
    }
    write_text(dir / "summary.csv", summary_csv(r.summary));
    write_text(dir / "report.json", mc_report_json(cfg, r.summary, r.report));
    write_text(dir / "report.csv", sensitivity::report_csv(r.report));
}

DirectorySummary summarize_directory(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error(dir.string() + " is not a directory");
    if (!fs::exists(dir / "series.csv") || !fs::exists(dir / "config.toml"))
        throw std::runtime_error(dir.string() + " holds no Monte Carlo runs");
    DirectorySummary out;
    out.config = load_config((dir / "config.toml").string());
    const auto& mc = out.config.monte_carlo;

    const CsvTable series = read_csv(dir / "series.csv");
    if (series.rows.empty()) throw std::runtime_error(dir.string() + " holds no runs");
    std::vector<std::string> variables(series.header.begin() + 2, series.header.end());
    std::vector<int> years;
    std::map<long, std::vector<double>> by_run;
    const std::size_t run_col = series.column("run"), year_col = series.column("year");
    for (const auto& row : series.rows) {
        const long run = std::stol(row[run_col]);
        const int year = std::stoi(row[year_col]);
        auto& values = by_run[run];
        if (by_run.size() == 1) years.push_back(year);
        for (std::size_t c = 2; c < row.size(); ++c) values.push_back(parse_number(row[c]));
    }
    std::vector<std::vector<double>> runs;
    for (auto& [_, v] : by_run) {
        if (v.size() != years.size() * variables.size())
            throw std::runtime_error("series.csv: runs cover different years");
        runs.push_back(std::move(v));
    }
    out.summary = summarize_runs(variables, years, runs, mc.readout_year, mc.employment_threshold);

    const CsvTable draws = read_csv(dir / "draws.csv");
    if (draws.rows.size() != runs.size())
        throw std::runtime_error("draws.csv and series.csv disagree on the number of runs");
    std::vector<std::string> names(draws.header.begin() + 1, draws.header.end());
    Eigen::MatrixXd x(static_cast<Eigen::Index>(draws.rows.size()),
                      static_cast<Eigen::Index>(names.size()));
    for (std::size_t i = 0; i < draws.rows.size(); ++i)
        for (std::size_t j = 0; j < names.size(); ++j)
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                parse_number(draws.rows[i][j + 1]);
    const auto yit = std::find(years.begin(), years.end(), static_cast<int>(std::lround(mc.readout_year)));
    const auto lit = std::find(variables.begin(), variables.end(), "lambda");
    std::vector<double> readout;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& run : runs)
        readout.push_back(yit == years.end() || lit == variables.end()
                              ? nan
                              : run[static_cast<std::size_t>(yit - years.begin()) * variables.size() +
                                    static_cast<std::size_t>(lit - variables.begin())]);
    out.report = sensitivity::analyze_batch(sensitivity::make_design(std::move(x), names), readout,
                                            mc.employment_threshold, mc.readout_year,
                                            out.config.seed);

    write_text(dir / "summary.csv", summary_csv(out.summary));
    write_text(dir / "report.json", mc_report_json(out.config, out.summary, out.report));
    write_text(dir / "report.csv", sensitivity::report_csv(out.report));
    return out;
}

}  // namespace gkclim
