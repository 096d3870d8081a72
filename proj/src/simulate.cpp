#include "gkclim/simulate.hpp"

#include <cmath>
#include <limits>

#include "gkclim/climate.hpp"
#include "gkclim/econ.hpp"
#include "gkclim/errors.hpp"

namespace gkclim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool all_finite(std::span<const double> y) {
    for (double v : y)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace

Trajectory simulate_reduced(const ParamSet& p, const RatioInit& start, double workforce,
                            double start_year, double horizon_years, int steps_per_year,
                            const SolverSettings& solver) {
    const VectorField field = [&p](double, std::span<const double> y, std::span<double> dy) {
        const auto f = econ::reduced_field({y[0], y[1], y[2], y[3]}, p);
        dy[0] = f.employment;
        dy[1] = f.wage_share;
        dy[2] = f.debt_ratio;
        dy[3] = f.workforce;
    };
    const DivergencePredicate diverged = [](double, std::span<const double> y) {
        return !all_finite(y) || std::abs(y[2]) > coupled::kDebtDivergence;
    };
    Trajectory traj =
        integrate(field, {start.employment, start.wage_share, start.debt_ratio, workforce},
                  start_year, start_year + horizon_years, solver, steps_per_year, diverged);
    traj.attach_derived(kReducedDerived, [&p](double, std::span<const double> y,
                                              std::span<double> out) {
        out[0] = y[0];
        out[1] = y[1];
        out[2] = y[2];
        out[3] = econ::profit_share(y[1], y[2], p);
        out[4] = y[3];
    });
    return traj;
}

Trajectory simulate_full(const ParamSet& p, const coupled::FullState& start,
                         coupled::FeedbackMode mode, double start_year, double horizon_years,
                         int steps_per_year, const SolverSettings& solver) {
    const VectorField inner = coupled::make_full_field(p, mode);
    const VectorField field = [inner, start_year](double t, std::span<const double> y,
                                                  std::span<double> dy) {
        inner(t - start_year, y, dy);
    };
    const DivergencePredicate diverged = [&p, mode](double, std::span<const double> y) {
        if (!all_finite(y)) return true;
        try {
            const auto r = coupled::ratios(coupled::FullState::from_array(y), mode, p);
            return !(std::abs(r.debt_ratio) <= coupled::kDebtDivergence);
        } catch (const NumericalError&) {
            return true;
        }
    };
    const auto y0 = start.to_array();
    Trajectory traj = integrate(field, {y0.begin(), y0.end()}, start_year,
                                start_year + horizon_years, solver, steps_per_year, diverged);
    traj.attach_derived(kFullDerived, [&p, mode, start_year](double t, std::span<const double> y,
                                                             std::span<double> out) {
        const auto s = coupled::FullState::from_array(y);
        try {
            const auto r = coupled::ratios(s, mode, p);
            out[0] = r.employment;
            out[1] = r.wage_share;
            out[2] = r.debt_ratio;
            out[3] = r.profit_share;
            out[4] = r.gross_output;
            out[5] = r.output;
            out[6] = r.damage;
            out[7] = r.abatement;
            out[8] = r.reduction;
            out[9] = r.emissions_ind;
            out[10] = r.emissions_ind + s.climate.land_emissions;
        } catch (const NumericalError&) {
            for (std::size_t k = 0; k < 11; ++k) out[k] = kNaN;
        }
        out[11] = s.climate.temperature;
        out[12] = s.climate.carbon_at;
        out[13] = climate::radiative_forcing(s.climate.carbon_at, t - start_year, p);
    });
    return traj;
}

Trajectory simulate(Variant variant, const ParamSet& p, const InitialConditions& ic,
                    const std::optional<RatioInit>& start, double horizon_years,
                    int steps_per_year, const SolverSettings& solver) {
    if (variant == Variant::Reduced)
        return simulate_reduced(p, start.value_or(implied_ratios(ic, p)), ic.workforce,
                                ic.start_year, horizon_years, steps_per_year, solver);
    const auto mode = coupled::feedback_for(variant);
    const auto state = start ? coupled::state_from_ratios(*start, ic, mode, p)
                             : coupled::initial_state(ic);
    return simulate_full(p, state, mode, ic.start_year, horizon_years, steps_per_year, solver);
}

Trajectory simulate(const ExperimentConfig& cfg) {
    return simulate(cfg.variant, cfg.params, cfg.initial, cfg.ratio_init, cfg.horizon_years,
                    cfg.steps_per_year, cfg.solver);
}

}  // namespace gkclim
