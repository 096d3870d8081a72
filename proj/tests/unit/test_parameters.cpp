#include <doctest.h>

#include <set>
#include <string>

#include "gkclim/errors.hpp"
#include "gkclim/parameters.hpp"

using namespace gkclim;

TEST_SUITE("parameters") {

TEST_CASE("default table values") {
    const ParamSet p = default_params();
    CHECK(p.productivity_growth == 0.02);
    CHECK(p.capital_output_ratio == 2.7);
    CHECK(p.workforce_max == 7.065);
    CHECK(p.phillips_intercept == -0.292);
    CHECK(p.phillips_slope == 0.469);
    CHECK(p.inflation_relaxation == 0.192);
    CHECK(p.markup == 1.875);
    CHECK(p.money_illusion == 0.9);
    CHECK(p.preind_carbon_at == 588);
    CHECK(p.preind_carbon_up == 360);
    CHECK(p.preind_carbon_lo == 1720);
    CHECK(p.climate_sensitivity == 3.1);
    CHECK(p.heat_capacity == 10.2);
    CHECK(p.damage_quadratic == 0.00236);
    CHECK(p.damage_power_exp == 7);
    CHECK(p.abatement_convexity == 2.6);
    CHECK(validate(p).empty());
}

TEST_CASE("initial conditions imply the stated 2016 ratios") {
    const auto r = implied_ratios(default_initial_conditions(), default_params());
    CHECK(r.employment == doctest::Approx(0.675).epsilon(0.01));
    CHECK(r.wage_share == doctest::Approx(0.578).epsilon(0.01));
    CHECK(r.debt_ratio == doctest::Approx(1.53).epsilon(0.01));
    CHECK(validate(default_initial_conditions()).empty());
}

TEST_CASE("validation flags out-of-range parameters") {
    ParamSet p;
    p.markup = 0.9;
    p.money_illusion = 1.2;
    p.abatement_convexity = 1.0;
    p.capital_output_ratio = 0;
    std::set<std::string> fields;
    for (const auto& v : validate(p)) fields.insert(v.field);
    CHECK(fields.count("markup"));
    CHECK(fields.count("money_illusion"));
    CHECK(fields.count("abatement_convexity"));
    CHECK(fields.count("capital_output_ratio"));

    InitialConditions ic;
    ic.workforce = -1;
    CHECK_FALSE(validate(ic).empty());
}

TEST_CASE("lookup by name or symbol") {
    ParamSet p;
    param_ref(p, "xi") = 1.5;
    CHECK(p.markup == 1.5);
    param_ref(p, "inflation_relaxation") = 0.3;
    CHECK(param_value(p, "eta") == 0.3);
    CHECK(canonical_param_name("C_UP") == "preind_carbon_up");
    CHECK(canonical_param_name("S") == "climate_sensitivity");
    CHECK_THROWS_AS(param_ref(p, "no_such_thing"), ConfigError);

    InitialConditions ic;
    initial_ref(ic, "K") = 100;
    CHECK(ic.capital == 100);
}

TEST_CASE("field tables are unique and complete") {
    std::set<std::string_view> names, symbols;
    for (const auto& f : param_fields()) {
        CHECK(names.insert(f.name).second);
        CHECK(symbols.insert(f.symbol).second);
    }
    CHECK(names.size() == param_fields().size());
    std::set<std::string_view> inames;
    for (const auto& f : initial_fields()) CHECK(inames.insert(f.name).second);
}

TEST_CASE("variant names") {
    for (auto v : {Variant::Reduced, Variant::FullNoFeedback, Variant::Full})
        CHECK(parse_variant(to_string(v)) == v);
    CHECK(parse_variant("full-no-feedback") == Variant::FullNoFeedback);
    CHECK_THROWS_AS(parse_variant("partial"), ConfigError);
}

TEST_CASE("experiment validation") {
    ExperimentConfig cfg;
    CHECK(validate(cfg).empty());
    cfg.horizon_years = 0;
    CHECK_FALSE(validate(cfg).empty());
    cfg = ExperimentConfig{};
    cfg.sweep_axes.push_back({"markup", 2.0, 1.0});
    CHECK_FALSE(validate(cfg).empty());
    cfg = ExperimentConfig{};
    cfg.basin.resolution = 1;
    CHECK_FALSE(validate(cfg).empty());
}

}
