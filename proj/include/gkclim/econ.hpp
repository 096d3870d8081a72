#pragma once

#include <string>
#include <vector>

#include "gkclim/parameters.hpp"

namespace gkclim::econ {

/// State of the reduced Goodwin–Keen system.
struct EconState {
    double employment = 0;  // lambda
    double wage_share = 0;  // omega
    double debt_ratio = 0;  // d
    double workforce = 0;   // N, billions
};

/// Linear Phillips curve Phi(lambda).
double phillips(double employment, const ParamSet& p);
/// Investment share kappa(pi), truncated linear.
double investment_share(double profit_share, const ParamSet& p);
/// Dividend share Delta(pi), truncated linear.
double dividend_share(double profit_share, const ParamSet& p);
/// Price inflation i(omega) = eta (xi omega - 1).
double inflation(double wage_share, const ParamSet& p);
/// pi = 1 - omega - r d.
double profit_share(double wage_share, double debt_ratio, const ParamSet& p);

/// Time derivative of the reduced 4-D system. The debt equation is used in
/// the multiplied-out form, so d = 0 is not special. Non-finite components are
/// returned as-is for the caller to treat as divergence.
EconState reduced_field(const EconState& s, const ParamSet& p);

/// Inverse of the investment function on the open interior of its clamp
/// interval. Throws NumericalError(KappaNotInvertible).
double investment_inverse(double kappa, const ParamSet& p);

struct InteriorEquilibrium {
    EconState state;
    double inflation = 0;
    /// False when lambda* falls outside (0, 1].
    bool economic = true;
    /// max-norm of reduced_field at the state.
    double residual = 0;
};

struct SecondaryWage {
    double wage_share = 0;
    bool admissible = false;
};

struct EquilibriumSet {
    double profit_share = 0;  // pi*
    std::vector<InteriorEquilibrium> interior;
    /// Zero-employment equilibria with positive wage share; absent when
    /// money_illusion == 1.
    bool has_secondary = false;
    SecondaryWage secondary;
    std::string notes;
};

/// Closed-form interior equilibria: pi* = kappa^{-1}(nu (alpha + delta)),
/// then the (omega*, d*) quadratic. Only roots with omega* > 0 are kept.
/// Throws NumericalError(KappaNotInvertible | PhillipsNotInvertible |
/// NoInteriorEquilibrium).
EquilibriumSet interior_equilibria(const ParamSet& p);

/// omega** = 1/xi + (Phi(0) - alpha) / (xi eta (1 - gamma)).
/// Throws NumericalError(MoneyIllusionSingular) when gamma == 1.
SecondaryWage secondary_wage_equilibrium(const ParamSet& p);

}  // namespace gkclim::econ
