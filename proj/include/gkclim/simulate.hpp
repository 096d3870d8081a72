#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gkclim/coupled.hpp"
#include "gkclim/ode.hpp"
#include "gkclim/parameters.hpp"

namespace gkclim {

/// Derived columns of reduced-model trajectories.
inline const std::vector<std::string> kReducedDerived{"lambda", "omega", "d", "pi", "N"};
/// Derived columns of full-model trajectories.
inline const std::vector<std::string> kFullDerived{
    "lambda", "omega", "d", "pi", "Y0", "Y", "damage", "abatement", "n", "E_ind", "E_total",
    "T", "CO2_AT", "forcing"};

/// Reduced model from ratios; state (lambda, omega, d, N), times in absolute years.
Trajectory simulate_reduced(const ParamSet& p, const RatioInit& start, double workforce,
                            double start_year, double horizon_years, int steps_per_year,
                            const SolverSettings& solver);

/// Coupled model from an extensive state; times in absolute years.
Trajectory simulate_full(const ParamSet& p, const coupled::FullState& start,
                         coupled::FeedbackMode mode, double start_year, double horizon_years,
                         int steps_per_year, const SolverSettings& solver);

/// One run of `variant` under `p`. `start` overrides the economic initial
/// ratios; without it the reduced model starts from the ratios implied by
/// the extensive initial conditions and the full model from those directly.
Trajectory simulate(Variant variant, const ParamSet& p, const InitialConditions& ic,
                    const std::optional<RatioInit>& start, double horizon_years,
                    int steps_per_year, const SolverSettings& solver);

/// Single run as configured.
Trajectory simulate(const ExperimentConfig& cfg);

}  // namespace gkclim
