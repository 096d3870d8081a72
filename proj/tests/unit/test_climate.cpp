#include <doctest.h>

#include <cmath>
#include <random>

#include "gkclim/climate.hpp"
#include "gkclim/ode.hpp"

using namespace gkclim;
using namespace gkclim::climate;

TEST_SUITE("climate") {

TEST_CASE("reduction rate") {
    const ParamSet p;
    CHECK(reduction_rate(0.0, 547.22, p) == 0.0);
    CHECK(reduction_rate(0.5 * 547.22, 547.22, p) == 1.0);
    CHECK(reduction_rate(400, 547.22, p) == 1.0);
    CHECK(reduction_rate(2.0, 547.22, p) == doctest::Approx(0.04623).epsilon(1e-3));
}

TEST_CASE("reduction rate minimises tax plus net abatement cost") {
    const ParamSet p;
    const double sigma = 0.6187;
    for (double pc : {2.0, 20.0, 80.0, 150.0}) {
        for (double pbs : {547.22, 300.0}) {
            // Firm cost per unit output: carbon tax on residual emissions
            // plus the unsubsidised share of the abatement cost.
            const auto cost = [&](double n) {
                return pc * sigma * (1 - n) +
                       (1 - p.abatement_subsidy) * sigma * pbs * std::pow(n, p.abatement_convexity) /
                           p.abatement_convexity;
            };
            double best = 0, best_cost = 1e300;
            for (int k = 0; k <= 10000; ++k) {
                const double n = k * 1e-4;
                if (cost(n) < best_cost) {
                    best_cost = cost(n);
                    best = n;
                }
            }
            CHECK(reduction_rate(pc, pbs, p) == doctest::Approx(best).epsilon(2e-4).scale(1));
        }
    }
}

TEST_CASE("reduction rate monotonicity") {
    const ParamSet p;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> upc(0, 400), upbs(50, 800);
    for (int i = 0; i < 500; ++i) {
        const double a = upc(rng), b = upc(rng), pbs = upbs(rng), pbs2 = upbs(rng);
        CHECK(reduction_rate(std::min(a, b), pbs, p) <= reduction_rate(std::max(a, b), pbs, p));
        CHECK(reduction_rate(a, std::min(pbs, pbs2), p) >= reduction_rate(a, std::max(pbs, pbs2), p));
    }
}

TEST_CASE("abatement cost") {
    const ParamSet p;
    CHECK(abatement_cost(0.6187, 547.22, 0.0, p) == 0.0);
    CHECK(abatement_cost(0.6187, 547.22, 1.0, p) ==
          doctest::Approx(1e-3 * 0.6187 * 547.22 / 2.6));
    const double a = abatement_cost(0.6187, 547.22, 0.04623, p);
    CHECK(a == doctest::Approx(0.6187e-3 * 547.22 * std::pow(0.04623, 2.6) / 2.6));
    CHECK(a < 1e-3);
}

TEST_CASE("damage function") {
    const ParamSet p;
    CHECK(damage_fraction(0.0, p) == 0.0);
    CHECK(damage_fraction(-1.0, p) == 0.0);
    CHECK(damage_fraction(4.0, p) == doctest::Approx(0.1001).epsilon(1e-3));
    CHECK(damage_fraction(2.0, p) == doctest::Approx(0.009914).epsilon(1e-3));
    double prev = 0;
    for (double t = 0; t < 20; t += 0.01) {
        const double d = damage_fraction(t, p);
        CHECK(d >= prev);
        CHECK(d < 1.0);
        prev = d;
    }
}

TEST_CASE("carbon exchange") {
    const ParamSet p;
    const auto zero = carbon_flux({588, 360, 1720}, 0.0, p);
    for (double v : zero) CHECK(std::abs(v) < 1e-12);

    const std::array<double, 3> c{851, 460, 1740};
    const auto f = carbon_flux(c, 0.0, p);
    CHECK(std::abs(f[0] + f[1] + f[2]) < 1e-12);
    // Explicit transfer matrix.
    const double m[3][3] = {{-0.024, 0.024 * 588 / 360, 0},
                            {0.024, -0.024 * 588 / 360 - 0.001, 0.001 * 360 / 1720},
                            {0, 0.001, -0.001 * 360 / 1720}};
    for (int i = 0; i < 3; ++i) {
        const double expect = m[i][0] * c[0] + m[i][1] * c[1] + m[i][2] * c[2];
        CHECK(f[i] == doctest::Approx(expect).epsilon(1e-13));
    }
    const auto g = carbon_flux(c, 3.0, p);
    CHECK(g[0] + g[1] + g[2] == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("forcing") {
    ParamSet p;
    p.exo_forcing_start = p.exo_forcing_end = 0;
    CHECK(radiative_forcing(588, 0, p) == 0.0);
    CHECK(radiative_forcing(2 * 588, 0, p) == doctest::Approx(3.681));
    CHECK(radiative_forcing(851, 0, p) == doctest::Approx(3.681 * std::log2(851.0 / 588.0)).epsilon(1e-14));
    CHECK(radiative_forcing(851, 0, p) == doctest::Approx(1.9636).epsilon(5e-4));
    const ParamSet q;
    CHECK(exogenous_forcing(0, q) == 0.5);
    CHECK(exogenous_forcing(42, q) == doctest::Approx(0.75));
    CHECK(exogenous_forcing(84, q) == 1.0);
    CHECK(exogenous_forcing(150, q) == 1.0);
}

TEST_CASE("temperature flux") {
    const ParamSet p;
    const auto [a, b] = temperature_flux(p.climate_sensitivity, p.climate_sensitivity, p.forcing_doubling, p);
    CHECK(std::abs(a) < 1e-15);
    CHECK(b == 0.0);
    const auto [z1, z2] = temperature_flux(0, 0, 0, p);
    CHECK(z1 == 0.0);
    CHECK(z2 == 0.0);
    const double F = 1.9636 + 0.5;
    const auto [dT, dTlo] = temperature_flux(0.85, 0.0068, F, p);
    CHECK(dT == doctest::Approx((F - 3.681 / 3.1 * 0.85 - 0.0176 * (0.85 - 0.0068)) / 10.2));
    CHECK(dTlo == doctest::Approx(0.0176 * (0.85 - 0.0068) / 3.52));
}

TEST_CASE("temperature block relaxes to the climate sensitivity") {
    const ParamSet p;
    for (const auto& start : {std::array<double, 2>{0, 0}, {0.85, 0.0068}, {6, 1}}) {
        const VectorField f = [&p](double, std::span<const double> y, std::span<double> dy) {
            const auto [a, b] = temperature_flux(y[0], y[1], p.forcing_doubling, p);
            dy[0] = a;
            dy[1] = b;
        };
        const auto traj = integrate(f, {start[0], start[1]}, 0, 5000, SolverSettings{}, 1);
        CHECK(traj.state(traj.size() - 1, 0) == doctest::Approx(3.1).epsilon(1e-3));
        CHECK(traj.state(traj.size() - 1, 1) == doctest::Approx(3.1).epsilon(1e-3));
    }
}

TEST_CASE("exogenous drivers") {
    const ParamSet p;
    ClimateState s;
    s.carbon_intensity = 0.6;
    s.intensity_growth = 0;
    s.land_emissions = 2.6;
    s.backstop_price = 547.22;
    const auto d = driver_flux(s, p);
    CHECK(d.carbon_intensity == 0.0);
    CHECK(d.intensity_growth == 0.0);
    CHECK(d.carbon_price == 1.0);

    const VectorField f = [&p](double, std::span<const double> y, std::span<double> dy) {
        ClimateState c;
        c.land_emissions = y[0];
        c.carbon_price = y[1];
        const auto r = driver_flux(c, p);
        dy[0] = r.land_emissions;
        dy[1] = r.carbon_price;
    };
    const auto traj = integrate(f, {2.6, 2.0}, 0, 50, SolverSettings{}, 1);
    CHECK(traj.state(50, 0) == doctest::Approx(2.6 * std::exp(-0.022 * 50)).epsilon(1e-6));
    CHECK(traj.state(50, 1) == doctest::Approx(52.0).epsilon(1e-12));
}

TEST_CASE("industrial emissions and policy outputs") {
    const ParamSet p;
    CHECK(industrial_emissions(0.6187, 1.0, 59.74) == 0.0);
    CHECK(industrial_emissions(0.6187, 0.3, 0.0) == 0.0);
    CHECK(industrial_emissions(0.6187, 0.04623, 59.74) == doctest::Approx(0.6187 * 0.95377 * 59.74));

    ClimateState s = initial_climate(InitialConditions{});
    const auto off = policy_outputs(s, 59.74, false, p);
    CHECK(off.reduction == 0.0);
    CHECK(off.abatement == 0.0);
    CHECK(off.carbon_tax == 0.0);
    CHECK(off.subsidy == 0.0);
    CHECK(off.emissions_ind == doctest::Approx(0.6187 * 59.74));
    const auto on = policy_outputs(s, 59.74, true, p);
    CHECK(on.reduction > 0);
    CHECK(on.subsidy == doctest::Approx(p.abatement_subsidy * on.abatement * 59.74));
    CHECK(on.carbon_tax == doctest::Approx(1e-3 * 2 * on.emissions_ind));
}

}
