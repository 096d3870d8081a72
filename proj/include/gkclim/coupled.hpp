#pragma once

#include <array>
#include <span>
#include <string_view>

#include "gkclim/climate.hpp"
#include "gkclim/econ.hpp"
#include "gkclim/ode.hpp"
#include "gkclim/parameters.hpp"

namespace gkclim::coupled {

inline constexpr std::size_t kDimension = 16;

/// Extensive state of the combined model. Vector layout (see to_array):
/// K, D, w, p, a, N, sigma, g_sigma, E_land, CO2_AT, CO2_UP, CO2_LO, T, T_LO, p_BS, p_C.
struct FullState {
    double capital = 0;       // K, $T
    double debt = 0;          // D, $T
    double wage = 0;          // w, $/worker·yr
    double price = 0;         // p
    double productivity = 0;  // a, $/worker·yr
    double workforce = 0;     // N, billions
    climate::ClimateState climate;

    std::array<double, kDimension> to_array() const;
    static FullState from_array(std::span<const double> y);
};

/// Column names of the vector layout, as used in trajectory files.
std::span<const std::string_view> state_names();

struct FeedbackMode {
    bool damages_enabled = true;
    bool policy_enabled = true;

    static constexpr FeedbackMode on() { return {true, true}; }
    static constexpr FeedbackMode off() { return {false, false}; }
};

FeedbackMode feedback_for(Variant v);

struct Ratios {
    double employment = 0;    // lambda
    double wage_share = 0;    // omega
    double debt_ratio = 0;    // d
    double profit_share = 0;  // pi
    double gross_output = 0;  // Y0
    double output = 0;        // Y, sold
    double damage = 0;        // D_frac
    double abatement = 0;     // A
    double reduction = 0;     // n
    double emissions_ind = 0;
    double labor = 0;         // L, billions
    double profit = 0;        // Pi, nominal $T/yr
    double carbon_tax = 0;
    double subsidy = 0;
};

/// Ratios and intermediate flows of a state. Throws NumericalError(DegenerateOutput)
/// when sold output is not positive.
Ratios ratios(const FullState& s, FeedbackMode mode, const ParamSet& p);

/// Nominal profits including damages, abatement, subsidy and carbon tax.
double profit(const FullState& s, FeedbackMode mode, const ParamSet& p);

FullState full_field(const FullState& s, double t, FeedbackMode mode, const ParamSet& p);

/// Vector-field adapter; `t` is years since the start year. Non-finite or
/// degenerate states produce NaN derivatives (treated as divergence).
VectorField make_full_field(const ParamSet& p, FeedbackMode mode);

/// Extensive state from the initial conditions.
FullState initial_state(const InitialConditions& ic);

/// Extensive state whose (lambda, omega, d) equal `r` under `mode`, keeping
/// capital, price, workforce and the climate block from `ic`. Productivity,
/// wage and debt are solved for.
FullState state_from_ratios(const RatioInit& r, const InitialConditions& ic, FeedbackMode mode,
                            const ParamSet& p);

enum class Category { Good, OutsideBounds, Bad, Divergent };

const char* to_string(Category c) noexcept;

struct Outcome {
    Category category = Category::Bad;
    double employment = 0;
    double wage_share = 0;
    double debt_ratio = 0;
    double temperature = 0;  // NaN for the reduced model
    double year = 0;
};

/// Classification by end values: the trajectory must carry derived columns
/// "lambda", "omega" and "d" (and optionally "T"); times are absolute years.
Outcome classify_outcome(const Trajectory& traj);

/// Category of end values, without the divergence flag.
Category classify(double employment, double wage_share, double debt_ratio);

/// lambda(year) > threshold, linearly interpolated between grid points.
/// Throws NumericalError(YearNotCovered).
bool mc_good(const Trajectory& traj, double year = 2100.0, double threshold = 0.4);

/// Derived column at an absolute year (linear interpolation between grid
/// points). Throws NumericalError(YearNotCovered).
double value_at_year(const Trajectory& traj, std::string_view column, double year);

/// Divergence guard: |d| > 1e6 or any non-finite entry.
inline constexpr double kDebtDivergence = 1e6;

}  // namespace gkclim::coupled
