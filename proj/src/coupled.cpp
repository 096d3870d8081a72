#include "gkclim/coupled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gkclim/errors.hpp"

namespace gkclim::coupled {

namespace {

constexpr std::array<std::string_view, kDimension> kStateNames{
    "K",      "D",      "w",      "p",      "a", "N",    "sigma", "g_sigma",
    "E_land", "CO2_AT", "CO2_UP", "CO2_LO", "T", "T_LO", "p_BS",  "p_C"};

}  // namespace

std::array<double, kDimension> FullState::to_array() const {
    const auto& c = climate;
    return {capital,          debt,          wage,          price,
            productivity,     workforce,     c.carbon_intensity, c.intensity_growth,
            c.land_emissions, c.carbon_at,   c.carbon_up,   c.carbon_lo,
            c.temperature,    c.temperature_lo, c.backstop_price, c.carbon_price};
}

FullState FullState::from_array(std::span<const double> y) {
    FullState s;
    s.capital = y[0];
    s.debt = y[1];
    s.wage = y[2];
    s.price = y[3];
    s.productivity = y[4];
    s.workforce = y[5];
    s.climate = {y[6], y[7], y[8], y[9], y[10], y[11], y[12], y[13], y[14], y[15]};
    return s;
}

std::span<const std::string_view> state_names() { return kStateNames; }

FeedbackMode feedback_for(Variant v) {
    return v == Variant::Full ? FeedbackMode::on() : FeedbackMode::off();
}

Ratios ratios(const FullState& s, FeedbackMode mode, const ParamSet& p) {
    Ratios r;
    r.gross_output = s.capital / p.capital_output_ratio;
    r.labor = units::kLaborPerOutput * r.gross_output / s.productivity;
    r.employment = r.labor / s.workforce;

    const auto policy = climate::policy_outputs(s.climate, r.gross_output, mode.policy_enabled, p);
    r.reduction = policy.reduction;
    r.abatement = policy.abatement;
    r.emissions_ind = policy.emissions_ind;
    r.carbon_tax = policy.carbon_tax;
    r.subsidy = policy.subsidy;
    r.damage = mode.damages_enabled ? climate::damage_fraction(s.climate.temperature, p) : 0.0;
    r.output = (1.0 - r.damage) * (1.0 - r.abatement) * r.gross_output;
    if (!(r.output > 0))
        throw NumericalError(NumericalError::Kind::DegenerateOutput,
                             "sold output is not positive");

    const double nominal = s.price * r.output;
    const double wage_bill = units::kWageBill * s.wage * r.labor;
    r.profit = nominal - wage_bill - p.interest_rate * s.debt +
               s.price * (r.subsidy - r.carbon_tax);
    r.wage_share = wage_bill / nominal;
    r.debt_ratio = s.debt / nominal;
    r.profit_share = r.profit / nominal;
    return r;
}

double profit(const FullState& s, FeedbackMode mode, const ParamSet& p) {
    return ratios(s, mode, p).profit;
}

FullState full_field(const FullState& s, double t, FeedbackMode mode, const ParamSet& p) {
    const Ratios r = ratios(s, mode, p);
    const double kappa = econ::investment_share(r.profit_share, p);
    const double i = econ::inflation(r.wage_share, p);
    const double nominal = s.price * r.output;

    FullState d;
    d.capital = kappa * r.output - p.depreciation * s.capital;
    d.debt = s.price * kappa * r.output - r.profit +
             econ::dividend_share(r.profit_share, p) * nominal;
    d.wage = s.wage * (econ::phillips(r.employment, p) + p.money_illusion * i);
    d.price = s.price * i;
    d.productivity = p.productivity_growth * s.productivity;
    d.workforce = p.workforce_growth * s.workforce * (1.0 - s.workforce / p.workforce_max);

    const auto drivers = climate::driver_flux(s.climate, p);
    d.climate.carbon_intensity = drivers.carbon_intensity;
    d.climate.intensity_growth = drivers.intensity_growth;
    d.climate.land_emissions = drivers.land_emissions;
    d.climate.backstop_price = drivers.backstop_price;
    d.climate.carbon_price = drivers.carbon_price;

    const double emissions =
        p.emission_carbon_factor * (r.emissions_ind + s.climate.land_emissions);
    const auto dc = climate::carbon_flux(
        {s.climate.carbon_at, s.climate.carbon_up, s.climate.carbon_lo}, emissions, p);
    d.climate.carbon_at = dc[0];
    d.climate.carbon_up = dc[1];
    d.climate.carbon_lo = dc[2];

    const double forcing = climate::radiative_forcing(s.climate.carbon_at, t, p);
    const auto [dT, dTlo] =
        climate::temperature_flux(s.climate.temperature, s.climate.temperature_lo, forcing, p);
    d.climate.temperature = dT;
    d.climate.temperature_lo = dTlo;
    return d;
}

VectorField make_full_field(const ParamSet& p, FeedbackMode mode) {
    return [p, mode](double t, std::span<const double> y, std::span<double> dydt) {
        try {
            const auto d = full_field(FullState::from_array(y), t, mode, p).to_array();
            std::copy(d.begin(), d.end(), dydt.begin());
        } catch (const NumericalError&) {
            std::fill(dydt.begin(), dydt.end(), std::numeric_limits<double>::quiet_NaN());
        }
    };
}

FullState initial_state(const InitialConditions& ic) {
    FullState s;
    s.capital = ic.capital;
    s.debt = ic.debt;
    s.wage = ic.wage;
    s.price = ic.price;
    s.productivity = ic.productivity;
    s.workforce = ic.workforce;
    s.climate = climate::initial_climate(ic);
    return s;
}

FullState state_from_ratios(const RatioInit& r, const InitialConditions& ic, FeedbackMode mode,
                            const ParamSet& p) {
    FullState s = initial_state(ic);
    const double gross = s.capital / p.capital_output_ratio;
    const double labor = r.employment * s.workforce;
    s.productivity = units::kLaborPerOutput * gross / labor;
    // Sold output depends on the climate block only, so it is fixed here.
    const Ratios base = ratios(s, mode, p);
    const double nominal = s.price * base.output;
    s.wage = r.wage_share * nominal / (units::kWageBill * labor);
    s.debt = r.debt_ratio * nominal;
    return s;
}

const char* to_string(Category c) noexcept {
    switch (c) {
        case Category::Good: return "good";
        case Category::OutsideBounds: return "outside_bounds";
        case Category::Bad: return "bad";
        case Category::Divergent: return "divergent";
    }
    return "unknown";
}

Category classify(double employment, double wage_share, double debt_ratio) {
    if (employment >= 0.4 && employment <= 0.99 && wage_share >= 0.4 && wage_share <= 0.99 &&
        debt_ratio <= 2.7)
        return Category::Good;
    if (employment > 0.99 || wage_share > 0.99) return Category::OutsideBounds;
    return Category::Bad;
}

Outcome classify_outcome(const Trajectory& traj) {
    if (traj.empty()) throw std::invalid_argument("cannot classify an empty trajectory");
    const std::size_t last = traj.size() - 1;
    Outcome o;
    o.employment = traj.derived_value(last, "lambda");
    o.wage_share = traj.derived_value(last, "omega");
    o.debt_ratio = traj.derived_value(last, "d");
    o.temperature = traj.has_derived("T") ? traj.derived_value(last, "T")
                                          : std::numeric_limits<double>::quiet_NaN();
    o.year = traj.times[last];
    o.category = traj.termination == Termination::Completed
                     ? classify(o.employment, o.wage_share, o.debt_ratio)
                     : Category::Divergent;
    return o;
}

double value_at_year(const Trajectory& traj, std::string_view column, double year) {
    constexpr double eps = 1e-9;
    if (traj.empty() || year < traj.times.front() - eps || year > traj.times.back() + eps)
        throw NumericalError(NumericalError::Kind::YearNotCovered,
                             "trajectory does not cover year " + std::to_string(year));
    const std::size_t col = traj.derived_index(column);
    const auto it = std::lower_bound(traj.times.begin(), traj.times.end(), year - eps);
    const auto hi = static_cast<std::size_t>(it - traj.times.begin());
    if (std::abs(traj.times[hi] - year) <= eps || hi == 0) return traj.derived_value(hi, col);
    const std::size_t lo = hi - 1;
    const double w = (year - traj.times[lo]) / (traj.times[hi] - traj.times[lo]);
    return (1 - w) * traj.derived_value(lo, col) + w * traj.derived_value(hi, col);
}

bool mc_good(const Trajectory& traj, double year, double threshold) {
    return value_at_year(traj, "lambda", year) > threshold;
}

}  // namespace gkclim::coupled
