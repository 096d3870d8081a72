#include "gkclim/climate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gkclim::climate {

ClimateState initial_climate(const InitialConditions& ic) {
    return {ic.carbon_intensity, ic.intensity_growth, ic.land_emissions, ic.carbon_at,
            ic.carbon_up,        ic.carbon_lo,        ic.temperature,    ic.temperature_lo,
            ic.backstop_price,   ic.carbon_price};
}

double reduction_rate(double carbon_price, double backstop_price, const ParamSet& p) {
    if (carbon_price <= 0) return 0.0;
    const double ratio = carbon_price / ((1.0 - p.abatement_subsidy) * backstop_price);
    if (ratio >= 1.0) return 1.0;
    return std::pow(ratio, 1.0 / (p.abatement_convexity - 1.0));
}

double abatement_cost(double carbon_intensity, double backstop_price, double reduction,
                      const ParamSet& p) {
    return units::kPriceTimesMass * carbon_intensity * backstop_price *
           std::pow(reduction, p.abatement_convexity) / p.abatement_convexity;
}

double damage_fraction(double temperature, const ParamSet& p) {
    if (!(temperature > 0)) return 0.0;
    const double T = temperature;
    const double denom = 1.0 + p.damage_linear * T + p.damage_quadratic * T * T +
                         p.damage_power_coef * std::pow(T, p.damage_power_exp);
    return 1.0 - 1.0 / denom;
}

std::array<double, 3> carbon_flux(const std::array<double, 3>& carbon, double emissions,
                                  const ParamSet& p) {
    const double at_up = p.preind_carbon_at / p.preind_carbon_up;
    const double up_lo = p.preind_carbon_up / p.preind_carbon_lo;
    const double phi12 = p.transfer_at_up;
    const double phi23 = p.transfer_up_lo;
    const auto [at, up, lo] = carbon;
    return {
        emissions - phi12 * at + phi12 * at_up * up,
        phi12 * at - (phi12 * at_up + phi23) * up + phi23 * up_lo * lo,
        phi23 * up - phi23 * up_lo * lo,
    };
}

double exogenous_forcing(double years_since_start, const ParamSet& p) {
    const double frac = std::clamp(years_since_start / p.exo_forcing_ramp_years, 0.0, 1.0);
    return p.exo_forcing_start + (p.exo_forcing_end - p.exo_forcing_start) * frac;
}

double radiative_forcing(double carbon_at, double years_since_start, const ParamSet& p) {
    return p.forcing_doubling / std::numbers::ln2 * std::log(carbon_at / p.preind_carbon_at) +
           exogenous_forcing(years_since_start, p);
}

std::pair<double, double> temperature_flux(double temperature, double temperature_lo,
                                           double forcing, const ParamSet& p) {
    const double exchange = p.heat_exchange * (temperature - temperature_lo);
    const double dT =
        (forcing - p.forcing_doubling / p.climate_sensitivity * temperature - exchange) /
        p.heat_capacity;
    return {dT, exchange / p.heat_capacity_lo};
}

DriverRates driver_flux(const ClimateState& s, const ParamSet& p) {
    return {
        s.intensity_growth * s.carbon_intensity,
        p.intensity_growth_decay * s.intensity_growth,
        p.land_emission_growth * s.land_emissions,
        p.backstop_price_growth * s.backstop_price,
        p.carbon_price_slope,
    };
}

double industrial_emissions(double carbon_intensity, double reduction, double gross_output) {
    return carbon_intensity * (1.0 - reduction) * gross_output;
}

PolicyOutputs policy_outputs(const ClimateState& s, double gross_output, bool policy_enabled,
                             const ParamSet& p) {
    PolicyOutputs out;
    if (policy_enabled) {
        out.reduction = reduction_rate(s.carbon_price, s.backstop_price, p);
        out.abatement = abatement_cost(s.carbon_intensity, s.backstop_price, out.reduction, p);
    }
    out.emissions_ind = industrial_emissions(s.carbon_intensity, out.reduction, gross_output);
    if (policy_enabled) {
        out.carbon_tax = units::kPriceTimesMass * s.carbon_price * out.emissions_ind;
        out.subsidy = p.abatement_subsidy * out.abatement * gross_output;
    }
    return out;
}

}  // namespace gkclim::climate
