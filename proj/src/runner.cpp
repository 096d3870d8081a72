#include "gkclim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "gkclim/config.hpp"
#include "gkclim/errors.hpp"
#include "gkclim/sampling.hpp"
#include "gkclim/simulate.hpp"

namespace gkclim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

unsigned resolve_workers(unsigned requested, std::size_t n) {
    unsigned w = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(n, 1)));
}

SweepRecord evaluate(const ExperimentConfig& cfg, const ParamSet& p,
                     const std::optional<RatioInit>& start, std::size_t index,
                     const TrajectorySink& sink) {
    SweepRecord rec;
    const Trajectory traj = simulate(cfg.variant, p, cfg.initial, start, cfg.horizon_years,
                                     cfg.steps_per_year, cfg.solver);
    rec.outcome = coupled::classify_outcome(traj);
    rec.termination = traj.termination;
    rec.index = index;
    if (sink) sink(index, traj);
    return rec;
}

}  // namespace

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn) {
    const unsigned w = resolve_workers(workers, n);
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (unsigned t = 0; t < w; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = n;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

ScenarioResult run_scenario(const ExperimentConfig& cfg) {
    require_valid(cfg);
    ScenarioResult r;
    r.trajectory = simulate(cfg);
    r.outcome = coupled::classify_outcome(r.trajectory);
    return r;
}

std::size_t SweepResult::count(coupled::Category c) const {
    return static_cast<std::size_t>(std::count_if(
        records.begin(), records.end(), [c](const SweepRecord& r) { return r.outcome.category == c; }));
}

double SweepResult::fraction(coupled::Category c) const {
    return records.empty() ? 0.0 : static_cast<double>(count(c)) / static_cast<double>(records.size());
}

SweepResult run_sobol_sweep(const ExperimentConfig& cfg, const TrajectorySink& sink) {
    require_valid(cfg);
    SweepResult result;
    result.kind = "sobol";
    result.variant = cfg.variant;
    for (const auto& axis : cfg.sweep_axes) {
        result.columns.emplace_back(canonical_param_name(axis.parameter));
        result.ranges.push_back({axis.lower, axis.upper});
    }
    const auto unit = sampling::sobol_points(cfg.sweep_axes.size(), cfg.samples, cfg.sobol_skip);
    const auto points = sampling::scale_to_box(unit, result.ranges);

    result.records.resize(points.size());
    parallel_for(points.size(), cfg.workers, [&](std::size_t i) {
        ParamSet p = cfg.params;
        for (std::size_t j = 0; j < points[i].size(); ++j)
            param_ref(p, result.columns[j]) = points[i][j];
        SweepRecord rec = evaluate(cfg, p, cfg.ratio_init, i, sink);
        rec.values = points[i];
        result.records[i] = std::move(rec);
    });
    return result;
}

SweepResult run_basin_grid(const ExperimentConfig& cfg, const TrajectorySink& sink) {
    require_valid(cfg);
    const auto& b = cfg.basin;
    const auto res = static_cast<std::size_t>(b.resolution);
    SweepResult result;
    result.kind = "basin";
    result.variant = cfg.variant;
    result.columns = {"markup", "lambda0", "omega0", "d0"};
    if (!b.markups.empty()) {
        const auto [lo, hi] = std::minmax_element(b.markups.begin(), b.markups.end());
        result.ranges.push_back({*lo, *hi});
    }
    result.ranges.push_back(b.employment);
    result.ranges.push_back(b.wage_share);
    result.ranges.push_back(b.debt_ratio);

    const auto node = [res](const Interval& r, std::size_t i) {
        return r.lower + (r.upper - r.lower) * static_cast<double>(i) / static_cast<double>(res - 1);
    };
    const std::size_t cells = res * res * res;
    result.records.resize(b.markups.size() * cells);
    parallel_for(result.records.size(), cfg.workers, [&](std::size_t k) {
        const std::size_t m = k / cells;
        const std::size_t c = k % cells;
        const std::size_t il = c / (res * res), iw = (c / res) % res, id = c % res;
        ParamSet p = cfg.params;
        p.markup = b.markups[m];
        p.inflation_relaxation = b.inflation_relaxation;
        p.money_illusion = b.money_illusion;
        const RatioInit start{node(b.employment, il), node(b.wage_share, iw), node(b.debt_ratio, id)};
        SweepRecord rec = evaluate(cfg, p, start, k, sink);
        rec.values = {p.markup, start.employment, start.wage_share, start.debt_ratio};
        result.records[k] = std::move(rec);
    });
    return result;
}

std::vector<std::string> mc_variables(Variant v) {
    if (v == Variant::Reduced) return {"lambda", "omega", "d"};
    return {"lambda", "omega", "d", "T"};
}

double McResult::value(std::size_t run, std::string_view variable, int year) const {
    const auto vit = std::find(variables.begin(), variables.end(), variable);
    const auto yit = std::find(years.begin(), years.end(), year);
    if (vit == variables.end() || yit == years.end())
        throw std::out_of_range("no Monte Carlo series for " + std::string(variable) + " in " +
                                std::to_string(year));
    const auto vi = static_cast<std::size_t>(vit - variables.begin());
    const auto yi = static_cast<std::size_t>(yit - years.begin());
    return runs[run].series[yi * variables.size() + vi];
}

double quantile(std::vector<double> values, double q) {
    std::erase_if(values, [](double v) { return !std::isfinite(v); });
    if (values.empty()) return kNaN;
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

McSummary summarize_runs(const std::vector<std::string>& variables, const std::vector<int>& years,
                         const std::vector<std::vector<double>>& series, double readout_year,
                         double employment_threshold) {
    if (series.empty()) throw std::invalid_argument("no runs to summarize");
    McSummary s;
    s.n_runs = series.size();
    s.readout_year = readout_year;
    const std::size_t nv = variables.size();
    for (std::size_t yi = 0; yi < years.size(); ++yi)
        for (std::size_t vi = 0; vi < nv; ++vi) {
            std::vector<double> col;
            col.reserve(series.size());
            for (const auto& run : series) col.push_back(run[yi * nv + vi]);
            QuantileRow row;
            row.variable = variables[vi];
            row.year = years[yi];
            row.n_finite = static_cast<std::size_t>(
                std::count_if(col.begin(), col.end(), [](double v) { return std::isfinite(v); }));
            row.median = quantile(col, 0.5);
            row.lower = quantile(col, 0.025);
            row.upper = quantile(col, 0.975);
            s.quantiles.push_back(std::move(row));
        }

    const auto readout = std::find(years.begin(), years.end(), static_cast<int>(std::lround(readout_year)));
    const auto index_of = [&](std::string_view name) -> std::ptrdiff_t {
        const auto it = std::find(variables.begin(), variables.end(), name);
        return it == variables.end() ? -1 : it - variables.begin();
    };
    const std::ptrdiff_t iT = index_of("T"), id = index_of("d"), il = index_of("lambda");
    s.median_temperature = s.frac_temperature_below_2 = s.frac_debt_below_2_7 = s.frac_both =
        s.frac_employment_good = kNaN;
    if (readout == years.end()) return s;
    const auto yi = static_cast<std::size_t>(readout - years.begin());
    const auto at = [&](const std::vector<double>& run, std::ptrdiff_t vi) {
        return run[yi * nv + static_cast<std::size_t>(vi)];
    };
    const double n = static_cast<double>(series.size());
    std::size_t t_below = 0, d_below = 0, both = 0, good = 0;
    std::vector<double> temps;
    for (const auto& run : series) {
        const bool tb = iT >= 0 && at(run, iT) < 2.0;
        const bool db = id >= 0 && at(run, id) < 2.7;
        t_below += tb;
        d_below += db;
        both += tb && db;
        good += il >= 0 && at(run, il) > employment_threshold;
        if (iT >= 0) temps.push_back(at(run, iT));
    }
    if (iT >= 0) {
        s.median_temperature = quantile(temps, 0.5);
        s.frac_temperature_below_2 = static_cast<double>(t_below) / n;
        s.frac_both = static_cast<double>(both) / n;
    }
    if (id >= 0) s.frac_debt_below_2_7 = static_cast<double>(d_below) / n;
    if (il >= 0) s.frac_employment_good = static_cast<double>(good) / n;
    return s;
}

McResult run_monte_carlo(const ExperimentConfig& cfg, const TrajectorySink& sink) {
    require_valid(cfg);
    const auto& mc = cfg.monte_carlo;
    McResult result;
    result.variant = cfg.variant;
    const auto dists = sampling::distributions_for(cfg.variant);
    for (const auto& d : dists) result.parameters.push_back(d.parameter);
    result.variables = mc_variables(cfg.variant);
    const int first = static_cast<int>(std::ceil(cfg.initial.start_year - 1e-9));
    const int last = static_cast<int>(std::floor(cfg.initial.start_year + mc.horizon_years + 1e-9));
    for (int y = first; y <= last; ++y) result.years.push_back(y);

    result.runs.resize(cfg.samples);
    parallel_for(cfg.samples, cfg.workers, [&](std::size_t i) {
        McRun run;
        run.index = i;
        auto rng = sampling::run_rng(cfg.seed, i);
        ParamSet p = cfg.params;
        for (const auto& d : dists) {
            const double v = sampling::draw(d.spec, rng);
            param_ref(p, d.parameter) = v;
            run.draws.push_back(v);
        }
        const Trajectory traj = simulate(cfg.variant, p, cfg.initial, cfg.ratio_init,
                                         mc.horizon_years, cfg.steps_per_year, cfg.solver);
        run.outcome = coupled::classify_outcome(traj);
        run.termination = traj.termination;
        if (sink) sink(i, traj);
        run.series.assign(result.years.size() * result.variables.size(), kNaN);
        for (std::size_t yi = 0; yi < result.years.size(); ++yi) {
            const double year = result.years[yi];
            if (year > traj.times.back() + 1e-9) break;
            for (std::size_t vi = 0; vi < result.variables.size(); ++vi)
                run.series[yi * result.variables.size() + vi] =
                    coupled::value_at_year(traj, result.variables[vi], year);
        }
        result.runs[i] = std::move(run);
    });

    std::vector<std::vector<double>> series;
    series.reserve(result.runs.size());
    for (const auto& r : result.runs) series.push_back(r.series);
    result.summary = summarize_runs(result.variables, result.years, series, mc.readout_year,
                                    mc.employment_threshold);

    Eigen::MatrixXd draws(static_cast<Eigen::Index>(result.runs.size()),
                          static_cast<Eigen::Index>(dists.size()));
    std::vector<double> readout;
    for (std::size_t i = 0; i < result.runs.size(); ++i) {
        for (std::size_t j = 0; j < dists.size(); ++j)
            draws(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = result.runs[i].draws[j];
        const auto yit = std::find(result.years.begin(), result.years.end(),
                                   static_cast<int>(std::lround(mc.readout_year)));
        readout.push_back(yit == result.years.end()
                              ? kNaN
                              : result.runs[i].series[static_cast<std::size_t>(yit - result.years.begin()) *
                                                      result.variables.size()]);
    }
    result.report = sensitivity::analyze_batch(
        sensitivity::make_design(std::move(draws), result.parameters), readout,
        mc.employment_threshold, mc.readout_year, cfg.seed);
    return result;
}

}  // namespace gkclim
