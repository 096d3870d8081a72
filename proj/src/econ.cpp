#include "gkclim/econ.hpp"

#include <algorithm>
#include <cmath>

#include "gkclim/errors.hpp"

namespace gkclim::econ {

using Kind = NumericalError::Kind;

double phillips(double employment, const ParamSet& p) {
    return p.phillips_intercept + p.phillips_slope * employment;
}

double investment_share(double profit_share, const ParamSet& p) {
    return std::clamp(p.investment_intercept + p.investment_slope * profit_share,
                      p.investment_min, p.investment_max);
}

double dividend_share(double profit_share, const ParamSet& p) {
    return std::clamp(p.dividend_intercept + p.dividend_slope * profit_share, p.dividend_min,
                      p.dividend_max);
}

double inflation(double wage_share, const ParamSet& p) {
    return p.inflation_relaxation * (p.markup * wage_share - 1.0);
}

double profit_share(double wage_share, double debt_ratio, const ParamSet& p) {
    return 1.0 - wage_share - p.interest_rate * debt_ratio;
}

EconState reduced_field(const EconState& s, const ParamSet& p) {
    const double pi = profit_share(s.wage_share, s.debt_ratio, p);
    const double kappa = investment_share(pi, p);
    const double i = inflation(s.wage_share, p);
    const double growth = kappa / p.capital_output_ratio - p.depreciation;
    const double labor_growth = p.workforce_growth * (1.0 - s.workforce / p.workforce_max);
    return {
        s.employment * (growth - p.productivity_growth - labor_growth),
        s.wage_share *
            (phillips(s.employment, p) - p.productivity_growth - (1.0 - p.money_illusion) * i),
        kappa - pi + dividend_share(pi, p) - s.debt_ratio * (i + growth),
        s.workforce * labor_growth,
    };
}

double investment_inverse(double kappa, const ParamSet& p) {
    if (p.investment_slope == 0 || !(kappa > p.investment_min && kappa < p.investment_max))
        throw NumericalError(Kind::KappaNotInvertible,
                             "required investment share " + std::to_string(kappa) +
                                 " is not inside the open range of the investment function");
    return (kappa - p.investment_intercept) / p.investment_slope;
}

namespace {

double max_norm(const EconState& f) {
    return std::max({std::abs(f.employment), std::abs(f.wage_share), std::abs(f.debt_ratio),
                     std::abs(f.workforce)});
}

}  // namespace

EquilibriumSet interior_equilibria(const ParamSet& p) {
    EquilibriumSet out;
    const double kappa_star = p.capital_output_ratio * (p.productivity_growth + p.depreciation);
    const double pi_star = investment_inverse(kappa_star, p);
    out.profit_share = pi_star;
    if (p.phillips_slope == 0)
        throw NumericalError(Kind::PhillipsNotInvertible, "Phillips curve slope is zero");

    // d* = m / (alpha + i(omega)), omega = u - r d*  with u = 1 - pi*
    // => (omega - u)(c omega + b) + r m = 0,  c = eta xi,  b = alpha - eta.
    const double m = kappa_star - pi_star + dividend_share(pi_star, p);
    const double u = 1.0 - pi_star;
    const double c = p.inflation_relaxation * p.markup;
    const double b = p.productivity_growth - p.inflation_relaxation;
    const double qa = c;
    const double qb = b - c * u;
    const double qc = p.interest_rate * m - b * u;

    std::vector<double> roots;
    if (qa == 0) {
        if (qb != 0) roots.push_back(-qc / qb);
    } else {
        const double disc = qb * qb - 4 * qa * qc;
        const double scale = std::max(qb * qb, std::abs(4 * qa * qc));
        if (std::abs(disc) <= 1e-12 * std::max(scale, 1e-300)) {
            roots.push_back(-qb / (2 * qa));
        } else if (disc > 0) {
            // Numerically stable pair.
            const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
            roots.push_back(q / qa);
            if (q != 0) roots.push_back(qc / q);
        }
    }
    std::sort(roots.begin(), roots.end(), std::greater<>());

    for (double omega : roots) {
        if (!(omega > 0)) continue;
        const double i = inflation(omega, p);
        const double denom = p.productivity_growth + i;
        if (denom == 0) continue;
        InteriorEquilibrium eq;
        eq.inflation = i;
        eq.state.wage_share = omega;
        eq.state.debt_ratio = m / denom;
        eq.state.employment = (p.productivity_growth + (1.0 - p.money_illusion) * i -
                               p.phillips_intercept) /
                              p.phillips_slope;
        eq.state.workforce = p.workforce_max;
        eq.economic = eq.state.employment > 0 && eq.state.employment <= 1;
        eq.residual = max_norm(reduced_field(eq.state, p));
        out.interior.push_back(eq);
    }
    if (out.interior.empty())
        throw NumericalError(Kind::NoInteriorEquilibrium,
                             "the equilibrium quadratic has no root with positive wage share");

    out.notes = "(lambda, omega, d) -> (0, 0, +inf) is always an asymptotic equilibrium";
    if (p.money_illusion != 1.0) {
        out.has_secondary = true;
        out.secondary = secondary_wage_equilibrium(p);
    }
    return out;
}

SecondaryWage secondary_wage_equilibrium(const ParamSet& p) {
    if (p.money_illusion == 1.0)
        throw NumericalError(Kind::MoneyIllusionSingular,
                             "omega** is undefined without money illusion (gamma = 1)");
    const double xi = p.markup;
    const double omega = 1.0 / xi + (phillips(0.0, p) - p.productivity_growth) /
                                        (xi * p.inflation_relaxation * (1.0 - p.money_illusion));
    return {omega, omega > 0};
}

}  // namespace gkclim::econ
