#include "gkclim/parameters.hpp"

#include <array>
#include <cmath>
#include <string>

#include "gkclim/errors.hpp"

namespace gkclim {

namespace {

constexpr std::array<ParamField, 44> kParamFields{{
    {"productivity_growth", &ParamSet::productivity_growth, "alpha"},
    {"depreciation", &ParamSet::depreciation, "delta"},
    {"capital_output_ratio", &ParamSet::capital_output_ratio, "nu"},
    {"workforce_growth", &ParamSet::workforce_growth, "delta_N"},
    {"workforce_max", &ParamSet::workforce_max, "N_max"},
    {"phillips_intercept", &ParamSet::phillips_intercept, "Phi0"},
    {"phillips_slope", &ParamSet::phillips_slope, "Phi1"},
    {"investment_intercept", &ParamSet::investment_intercept, "kappa0"},
    {"investment_slope", &ParamSet::investment_slope, "kappa1"},
    {"investment_min", &ParamSet::investment_min, "kappa_min"},
    {"investment_max", &ParamSet::investment_max, "kappa_max"},
    {"dividend_intercept", &ParamSet::dividend_intercept, "Delta0"},
    {"dividend_slope", &ParamSet::dividend_slope, "Delta1"},
    {"dividend_min", &ParamSet::dividend_min, "Delta_min"},
    {"dividend_max", &ParamSet::dividend_max, "Delta_max"},
    {"interest_rate", &ParamSet::interest_rate, "r"},
    {"inflation_relaxation", &ParamSet::inflation_relaxation, "eta"},
    {"markup", &ParamSet::markup, "xi"},
    {"money_illusion", &ParamSet::money_illusion, "gamma"},
    {"preind_carbon_at", &ParamSet::preind_carbon_at, "C_AT"},
    {"preind_carbon_up", &ParamSet::preind_carbon_up, "C_UP"},
    {"preind_carbon_lo", &ParamSet::preind_carbon_lo, "C_LO"},
    {"transfer_at_up", &ParamSet::transfer_at_up, "phi12"},
    {"transfer_up_lo", &ParamSet::transfer_up_lo, "phi23"},
    {"intensity_growth_decay", &ParamSet::intensity_growth_decay, "delta_gsigma"},
    {"land_emission_growth", &ParamSet::land_emission_growth, "delta_Eland"},
    {"backstop_price_growth", &ParamSet::backstop_price_growth, "delta_pBS"},
    {"carbon_price_slope", &ParamSet::carbon_price_slope, "delta_C"},
    {"forcing_doubling", &ParamSet::forcing_doubling, "F_dbl"},
    {"exo_forcing_start", &ParamSet::exo_forcing_start, "F_exo_start"},
    {"exo_forcing_end", &ParamSet::exo_forcing_end, "F_exo_end"},
    {"exo_forcing_ramp_years", &ParamSet::exo_forcing_ramp_years, "F_exo_ramp"},
    {"preind_temperature", &ParamSet::preind_temperature, "T_preind"},
    {"heat_capacity", &ParamSet::heat_capacity, "c"},
    {"heat_capacity_lo", &ParamSet::heat_capacity_lo, "c_LO"},
    {"heat_exchange", &ParamSet::heat_exchange, "h"},
    {"climate_sensitivity", &ParamSet::climate_sensitivity, "S"},
    {"damage_linear", &ParamSet::damage_linear, "zeta1"},
    {"damage_quadratic", &ParamSet::damage_quadratic, "zeta2"},
    {"damage_power_coef", &ParamSet::damage_power_coef, "zeta3"},
    {"damage_power_exp", &ParamSet::damage_power_exp, "zeta4"},
    {"abatement_convexity", &ParamSet::abatement_convexity, "theta"},
    {"abatement_subsidy", &ParamSet::abatement_subsidy, "s_A"},
    {"emission_carbon_factor", &ParamSet::emission_carbon_factor, "co2_to_c"},
}};

constexpr std::array<InitialField, 17> kInitialFields{{
    {"capital", &InitialConditions::capital, "K"},
    {"debt", &InitialConditions::debt, "D"},
    {"workforce", &InitialConditions::workforce, "N"},
    {"wage", &InitialConditions::wage, "w"},
    {"productivity", &InitialConditions::productivity, "a"},
    {"price", &InitialConditions::price, "p"},
    {"carbon_intensity", &InitialConditions::carbon_intensity, "sigma"},
    {"intensity_growth", &InitialConditions::intensity_growth, "g_sigma"},
    {"land_emissions", &InitialConditions::land_emissions, "E_land"},
    {"backstop_price", &InitialConditions::backstop_price, "p_BS"},
    {"carbon_price", &InitialConditions::carbon_price, "p_C"},
    {"carbon_at", &InitialConditions::carbon_at, "CO2_AT"},
    {"carbon_up", &InitialConditions::carbon_up, "CO2_UP"},
    {"carbon_lo", &InitialConditions::carbon_lo, "CO2_LO"},
    {"temperature", &InitialConditions::temperature, "T"},
    {"temperature_lo", &InitialConditions::temperature_lo, "T_LO"},
    {"start_year", &InitialConditions::start_year, "year"},
}};

void require(std::vector<Violation>& out, bool ok, std::string_view field, std::string msg) {
    if (!ok) out.push_back({std::string(field), std::move(msg)});
}

}  // namespace

const char* to_string(NumericalError::Kind kind) noexcept {
    using K = NumericalError::Kind;
    switch (kind) {
        case K::NoInteriorEquilibrium: return "NoInteriorEquilibrium";
        case K::KappaNotInvertible: return "KappaNotInvertible";
        case K::PhillipsNotInvertible: return "PhillipsNotInvertible";
        case K::MoneyIllusionSingular: return "MoneyIllusionSingular";
        case K::DegenerateOutput: return "DegenerateOutput";
        case K::StepFailure: return "StepFailure";
        case K::YearNotCovered: return "YearNotCovered";
        case K::DimensionUnsupported: return "DimensionUnsupported";
        case K::ZeroVariance: return "ZeroVariance";
        case K::InsufficientData: return "InsufficientData";
        case K::SingleClass: return "SingleClass";
        case K::Separation: return "Separation";
        case K::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

const char* to_string(Variant v) noexcept {
    switch (v) {
        case Variant::Reduced: return "reduced";
        case Variant::FullNoFeedback: return "full-nofb";
        case Variant::Full: return "full";
    }
    return "unknown";
}

Variant parse_variant(std::string_view s) {
    if (s == "reduced") return Variant::Reduced;
    if (s == "full-nofb" || s == "full-no-feedback") return Variant::FullNoFeedback;
    if (s == "full" || s == "full-with-feedback") return Variant::Full;
    throw ConfigError("unknown model variant '" + std::string(s) +
                      "' (expected reduced, full-nofb or full)");
}

ParamSet default_params() { return ParamSet{}; }

InitialConditions default_initial_conditions() { return InitialConditions{}; }

RatioInit implied_ratios(const InitialConditions& ic, const ParamSet& p) {
    const double output = ic.capital / p.capital_output_ratio;
    const double labor = units::kLaborPerOutput * output / ic.productivity;
    const double nominal = ic.price * output;
    return {labor / ic.workforce, units::kWageBill * ic.wage * labor / nominal, ic.debt / nominal};
}

std::vector<Violation> validate(const ParamSet& p) {
    std::vector<Violation> v;
    for (const auto& f : kParamFields) {
        require(v, std::isfinite(p.*f.member), f.name, "must be finite");
    }
    require(v, p.capital_output_ratio > 0, "capital_output_ratio", "nu>0 required");
    require(v, p.inflation_relaxation > 0, "inflation_relaxation", "eta>0 required");
    require(v, p.markup >= 1, "markup", "xi>=1 required");
    require(v, p.money_illusion >= 0 && p.money_illusion <= 1, "money_illusion",
            "gamma must lie in [0,1]");
    require(v, p.abatement_subsidy >= 0 && p.abatement_subsidy < 1, "abatement_subsidy",
            "s_A must lie in [0,1)");
    require(v, p.abatement_convexity > 1, "abatement_convexity", "theta>1 required");
    require(v, p.investment_min <= p.investment_max, "investment_min",
            "kappa_min<=kappa_max required");
    require(v, p.dividend_min <= p.dividend_max, "dividend_min",
            "Delta_min<=Delta_max required");
    require(v, p.workforce_max > 0, "workforce_max", "N_max>0 required");
    require(v, p.preind_carbon_at > 0, "preind_carbon_at", "must be positive");
    require(v, p.preind_carbon_up > 0, "preind_carbon_up", "must be positive");
    require(v, p.preind_carbon_lo > 0, "preind_carbon_lo", "must be positive");
    require(v, p.heat_capacity > 0, "heat_capacity", "must be positive");
    require(v, p.heat_capacity_lo > 0, "heat_capacity_lo", "must be positive");
    require(v, p.climate_sensitivity > 0, "climate_sensitivity", "S>0 required");
    require(v, p.exo_forcing_ramp_years > 0, "exo_forcing_ramp_years", "must be positive");
    require(v, p.emission_carbon_factor > 0, "emission_carbon_factor", "must be positive");
    return v;
}

std::vector<Violation> validate(const InitialConditions& ic) {
    std::vector<Violation> v;
    for (const auto& f : kInitialFields)
        require(v, std::isfinite(ic.*f.member), f.name, "must be finite");
    for (auto name : {"capital", "workforce", "wage", "productivity", "price",
                      "carbon_intensity", "backstop_price", "carbon_at", "carbon_up",
                      "carbon_lo"}) {
        for (const auto& f : kInitialFields)
            if (f.name == name) require(v, ic.*f.member > 0, f.name, "must be positive");
    }
    require(v, ic.land_emissions >= 0, "land_emissions", "must be non-negative");
    require(v, ic.carbon_price >= 0, "carbon_price", "must be non-negative");
    require(v, ic.intensity_growth < 0, "intensity_growth", "g_sigma(0)<0 required");
    return v;
}

std::vector<Violation> validate(const ExperimentConfig& cfg) {
    std::vector<Violation> v = validate(cfg.params);
    for (auto& x : validate(cfg.initial)) v.push_back(std::move(x));
    require(v, cfg.horizon_years > 0, "horizon_years", "horizon>0 required");
    require(v, cfg.steps_per_year >= 1, "steps_per_year", "steps/year>=1 required");
    require(v, cfg.samples >= 1, "samples", "sample count>=1 required");
    require(v, cfg.solver.rtol > 0 && cfg.solver.atol > 0, "solver", "tolerances must be > 0");
    require(v, cfg.basin.resolution >= 2, "basin.resolution", "at least 2 points per axis");
    require(v, cfg.monte_carlo.horizon_years > 0, "monte_carlo.horizon_years",
            "horizon>0 required");
    for (const auto& axis : cfg.sweep_axes) {
        require(v, axis.lower < axis.upper, "sweep." + axis.parameter, "lower<upper required");
        try {
            canonical_param_name(axis.parameter);
        } catch (const ConfigError&) {
            v.push_back({"sweep." + axis.parameter, "unknown parameter"});
        }
    }
    if (cfg.ratio_init)
        require(v, cfg.ratio_init->employment > 0 && cfg.ratio_init->wage_share > 0,
                "ratio_init", "employment and wage share must be positive");
    return v;
}

std::span<const ParamField> param_fields() {
    return kParamFields;
}

std::span<const InitialField> initial_fields() { return kInitialFields; }

std::string_view canonical_param_name(std::string_view name) {
    for (const auto& f : kParamFields) {
        if (f.name == name || f.symbol == name) return f.name;
    }
    throw ConfigError("unknown parameter '" + std::string(name) + "'");
}

double& param_ref(ParamSet& p, std::string_view name) {
    for (const auto& f : kParamFields)
        if (f.name == name || f.symbol == name) return p.*f.member;
    throw ConfigError("unknown parameter '" + std::string(name) + "'");
}

double param_value(const ParamSet& p, std::string_view name) {
    for (const auto& f : kParamFields)
        if (f.name == name || f.symbol == name) return p.*f.member;
    throw ConfigError("unknown parameter '" + std::string(name) + "'");
}

double& initial_ref(InitialConditions& ic, std::string_view name) {
    for (const auto& f : kInitialFields)
        if (f.name == name || f.symbol == name) return ic.*f.member;
    throw ConfigError("unknown initial condition '" + std::string(name) + "'");
}

}  // namespace gkclim
