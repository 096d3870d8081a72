#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gkclim/ode.hpp"

namespace gkclim {

/// Unit bookkeeping. Output and capital are in trillions of dollars ($T),
/// the workforce in billions, wages and productivity in $/(worker·yr),
/// carbon prices in $/t and carbon stocks/flows in Gt.
namespace units {
/// Labour in billions of workers: L = kLaborPerOutput · Y[$T] / a[$/worker·yr].
inline constexpr double kLaborPerOutput = 1e3;
/// Wage bill in $T: w[$/worker·yr] · L[billion] · kWageBill.
inline constexpr double kWageBill = 1e-3;
/// ($/t)·(Gt) → $T, and (Gt/$T)·($/t) → dimensionless.
inline constexpr double kPriceTimesMass = 1e-3;
}  // namespace units

/// Every model constant, with the calibrated defaults of the combined
/// Goodwin–Keen / DICE model. All rates are per year.
struct ParamSet {
    // economy
    double productivity_growth = 0.02;     // alpha
    double depreciation = 0.04;            // delta
    double capital_output_ratio = 2.7;     // nu
    double workforce_growth = 0.031;       // delta_N
    double workforce_max = 7.065;          // N_max, billions
    double phillips_intercept = -0.292;    // Phi_0
    double phillips_slope = 0.469;         // Phi_1
    double investment_intercept = 0.0318;  // kappa_0
    double investment_slope = 0.575;       // kappa_1
    double investment_min = 0.0;
    double investment_max = 0.3;
    double dividend_intercept = -0.078;    // Delta_0
    double dividend_slope = 0.553;         // Delta_1
    double dividend_min = 0.0;
    double dividend_max = 0.3;
    double interest_rate = 0.02;           // r
    double inflation_relaxation = 0.192;   // eta
    double markup = 1.875;                 // xi
    double money_illusion = 0.9;           // gamma

    // carbon cycle, GtC
    double preind_carbon_at = 588.0;
    double preind_carbon_up = 360.0;
    double preind_carbon_lo = 1720.0;
    double transfer_at_up = 0.024;         // phi_12
    double transfer_up_lo = 0.001;         // phi_23

    // exogenous drivers
    double intensity_growth_decay = -0.001;  // delta_gsigma
    double land_emission_growth = -0.022;    // delta_Eland
    double backstop_price_growth = -0.005;   // delta_pBS
    double carbon_price_slope = 1.0;         // delta_C, $/t/yr

    // forcing and temperature
    double forcing_doubling = 3.681;       // F_dbl, W/m^2
    double exo_forcing_start = 0.5;
    double exo_forcing_end = 1.0;
    double exo_forcing_ramp_years = 84.0;  // 2016 -> 2100
    double preind_temperature = 13.74;     // deg C
    double heat_capacity = 10.20;          // c
    double heat_capacity_lo = 3.52;        // c_LO
    double heat_exchange = 0.0176;         // h
    double climate_sensitivity = 3.1;      // S, deg C

    // damages: D = 1 - 1/(1 + z1 T + z2 T^2 + z3 T^z4)
    double damage_linear = 0.0;
    double damage_quadratic = 0.00236;
    double damage_power_coef = 4.48e-06;
    double damage_power_exp = 7.0;

    // policy
    double abatement_convexity = 2.6;      // theta
    double abatement_subsidy = 0.5;        // s_A

    /// Converts emission flows (CO2-equivalent mass) into the carbon mass
    /// the reservoirs are measured in.
    double emission_carbon_factor = 1.0 / 3.666;
};

/// Initial state of the 16-dimensional model in 2016.
struct InitialConditions {
    double capital = 161.3;          // $T
    double debt = 91.4;              // $T
    double workforce = 4.83;         // billions
    double wage = 10591.0;           // $/worker·yr
    double productivity = 18323.0;   // $/worker·yr
    double price = 1.0;
    double carbon_intensity = 0.6187;  // Gt per $T of output
    double intensity_growth = -0.0105;
    double land_emissions = 2.6;     // Gt/yr
    double backstop_price = 547.22;  // $/t
    double carbon_price = 2.0;       // $/t
    double carbon_at = 851.0;        // GtC
    double carbon_up = 460.0;
    double carbon_lo = 1740.0;
    double temperature = 0.85;       // deg C anomaly
    double temperature_lo = 0.0068;
    double start_year = 2016.0;
};

/// Employment rate, wage share and debt ratio used to start the economic block.
struct RatioInit {
    double employment = 0.675;
    double wage_share = 0.578;
    double debt_ratio = 1.53;
};

enum class Variant { Reduced, FullNoFeedback, Full };

const char* to_string(Variant v) noexcept;
/// Accepts "reduced", "full-nofb" (or "full-no-feedback") and "full".
Variant parse_variant(std::string_view s);

struct SweepAxis {
    std::string parameter;
    double lower = 0.0;
    double upper = 1.0;
};

struct Interval {
    double lower = 0.0;
    double upper = 1.0;
};

struct BasinSettings {
    int resolution = 20;
    std::vector<double> markups{1.18, 1.3, 1.875};
    Interval employment{0.2, 0.99};
    Interval wage_share{0.2, 0.99};
    Interval debt_ratio{0.1, 2.7};
    double inflation_relaxation = 0.4;
    double money_illusion = 0.9;
};

struct MonteCarloSettings {
    double horizon_years = 184.0;  // 2016 -> 2200
    double readout_year = 2100.0;
    double employment_threshold = 0.4;
};

struct ExperimentConfig {
    Variant variant = Variant::Reduced;
    double horizon_years = 180.0;
    int steps_per_year = 20;
    SolverSettings solver;
    ParamSet params;
    InitialConditions initial;
    /// When set, the economic block starts from these ratios instead of the
    /// extensive initial conditions.
    std::optional<RatioInit> ratio_init;
    std::vector<SweepAxis> sweep_axes{
        {"inflation_relaxation", 0.05, 0.8}, {"markup", 1.0, 2.2}, {"money_illusion", 0.0, 1.0}};
    std::size_t sobol_skip = 1;
    std::size_t samples = 512;
    std::uint64_t seed = 20210401;
    BasinSettings basin;
    MonteCarloSettings monte_carlo;
    bool save_trajectories = false;
    unsigned workers = 0;  // 0 = hardware concurrency
};

ParamSet default_params();
InitialConditions default_initial_conditions();

/// (employment, wage share, debt ratio) implied by the extensive initial
/// conditions, ignoring damages and abatement.
RatioInit implied_ratios(const InitialConditions& ic, const ParamSet& p);

struct Violation {
    std::string field;
    std::string message;
};

std::vector<Violation> validate(const ParamSet& p);
std::vector<Violation> validate(const InitialConditions& ic);
std::vector<Violation> validate(const ExperimentConfig& cfg);

/// Name/member table so that parameters can be set, dumped and parsed by name.
struct ParamField {
    std::string_view name;
    double ParamSet::*member;
    std::string_view symbol;
};
struct InitialField {
    std::string_view name;
    double InitialConditions::*member;
    std::string_view symbol;
};

std::span<const ParamField> param_fields();
std::span<const InitialField> initial_fields();

/// Looks a parameter up by field name or by its conventional symbol
/// ("xi", "eta", "gamma", "alpha", "S", "C_UP", ...). Throws ConfigError.
double& param_ref(ParamSet& p, std::string_view name);
double param_value(const ParamSet& p, std::string_view name);
/// Canonical field name for a name or symbol; throws ConfigError.
std::string_view canonical_param_name(std::string_view name);
double& initial_ref(InitialConditions& ic, std::string_view name);

}  // namespace gkclim
