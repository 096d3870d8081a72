#pragma once

#include <array>
#include <utility>

#include "gkclim/parameters.hpp"

namespace gkclim::climate {

struct ClimateState {
    double carbon_intensity = 0;  // sigma, Gt per $T
    double intensity_growth = 0;  // g_sigma
    double land_emissions = 0;    // Gt/yr
    double carbon_at = 0;         // GtC
    double carbon_up = 0;
    double carbon_lo = 0;
    double temperature = 0;       // deg C anomaly
    double temperature_lo = 0;
    double backstop_price = 0;    // $/t
    double carbon_price = 0;      // $/t
};

ClimateState initial_climate(const InitialConditions& ic);

struct PolicyOutputs {
    double reduction = 0;       // n
    double abatement = 0;       // A, fraction of gross output
    double emissions_ind = 0;   // Gt/yr
    double carbon_tax = 0;      // $T/yr, real
    double subsidy = 0;         // $T/yr, real
};

/// Cost-minimising emission reduction rate, capped at 1.
double reduction_rate(double carbon_price, double backstop_price, const ParamSet& p);

/// Abatement cost per unit of production, sigma p_BS n^theta / theta.
double abatement_cost(double carbon_intensity, double backstop_price, double reduction,
                      const ParamSet& p);

/// 1 - 1/(1 + z1 T + z2 T^2 + z3 T^z4); zero for T <= 0.
double damage_fraction(double temperature, const ParamSet& p);

/// Three-reservoir carbon exchange plus total emissions (GtC/yr) into the atmosphere.
std::array<double, 3> carbon_flux(const std::array<double, 3>& carbon, double emissions,
                                  const ParamSet& p);

/// Linear ramp from the start to the end value over the ramp period, then flat.
double exogenous_forcing(double years_since_start, const ParamSet& p);

/// Forcing from atmospheric carbon plus exogenous forcing.
double radiative_forcing(double carbon_at, double years_since_start, const ParamSet& p);

/// (dT/dt, dT_LO/dt) of the two-layer energy balance.
std::pair<double, double> temperature_flux(double temperature, double temperature_lo,
                                           double forcing, const ParamSet& p);

struct DriverRates {
    double carbon_intensity = 0;
    double intensity_growth = 0;
    double land_emissions = 0;
    double backstop_price = 0;
    double carbon_price = 0;
};

DriverRates driver_flux(const ClimateState& s, const ParamSet& p);

/// sigma (1 - n) Y0.
double industrial_emissions(double carbon_intensity, double reduction, double gross_output);

/// Reduction, abatement, emissions, tax and subsidy for gross output Y0.
/// With `policy_enabled == false` there is no abatement, tax or subsidy.
PolicyOutputs policy_outputs(const ClimateState& s, double gross_output, bool policy_enabled,
                             const ParamSet& p);

}  // namespace gkclim::climate
