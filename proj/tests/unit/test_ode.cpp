#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gkclim/errors.hpp"
#include "gkclim/ode.hpp"

using namespace gkclim;

namespace {

const VectorField decay = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = -y[0];
};

const VectorField oscillator = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
};

}  // namespace

TEST_SUITE("ode") {

TEST_CASE("exponential decay") {
    SolverSettings s;
    s.rtol = 1e-10;
    s.atol = 1e-14;
    const auto t = integrate(decay, {1.0}, 0, 10, s, 1);
    REQUIRE(t.size() == 11);
    for (std::size_t k = 0; k < t.size(); ++k)
        CHECK(t.state(k, 0) == doctest::Approx(std::exp(-double(k))).epsilon(1e-8));
    CHECK(t.termination == Termination::Completed);
}

TEST_CASE("harmonic oscillator energy") {
    SolverSettings s;
    s.rtol = 1e-10;
    s.atol = 1e-12;
    const double T = 2 * std::numbers::pi;
    const auto t = integrate(oscillator, {1.0, 0.0}, 0, 100 * T, s, 10);
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double e = 0.5 * (t.state(k, 0) * t.state(k, 0) + t.state(k, 1) * t.state(k, 1));
        CHECK(std::abs(e - 0.5) < 1e-6);
    }
    CHECK(t.state(t.size() - 1, 0) == doctest::Approx(std::cos(t.times.back())).epsilon(1e-6));
}

TEST_CASE("moderately stiff linear system") {
    const VectorField f = [](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = -y[0];
        dy[1] = -1000 * y[1];
    };
    SolverSettings s;
    s.rtol = 1e-6;
    s.atol = 1e-10;
    const auto t = integrate(f, {1.0, 1.0}, 0, 10, s, 1);
    REQUIRE(t.termination == Termination::Completed);
    for (std::size_t k = 0; k < t.size(); ++k) {
        CHECK(std::abs(t.state(k, 0) - std::exp(-double(k))) < 1e-5);
        CHECK(std::abs(t.state(k, 1) - std::exp(-1000.0 * k)) < 1e-5);
    }
}

TEST_CASE("error shrinks with tolerance at roughly fifth order") {
    // Non-autonomous problem y' = cos(t) y, y = exp(sin t).
    const VectorField f = [](double t, std::span<const double> y, std::span<double> dy) {
        dy[0] = std::cos(t) * y[0];
    };
    double prev_err = 0;
    std::size_t prev_steps = 0;
    for (double tol : {1e-5, 1e-7, 1e-9}) {
        SolverSettings s;
        s.rtol = tol;
        s.atol = tol * 1e-2;
        const auto t = integrate(f, {1.0}, 0, 20, s, 1);
        const double err = std::abs(t.state(20, 0) - std::exp(std::sin(20.0)));
        CHECK(err < 100 * tol);
        if (prev_steps > 0) {
            CHECK(err < prev_err);
            // 100x tighter tolerance costs roughly 100^(1/5) = 2.5x more steps.
            const double ratio = double(t.stats.accepted) / double(prev_steps);
            CHECK(ratio > 1.5);
            CHECK(ratio < 4.5);
        }
        prev_err = err;
        prev_steps = t.stats.accepted;
    }
}

TEST_CASE("determinism and grid") {
    const auto a = integrate(oscillator, {1.0, 0.5}, 3, 13, SolverSettings{}, 4);
    const auto b = integrate(oscillator, {1.0, 0.5}, 3, 13, SolverSettings{}, 4);
    CHECK(a.states == b.states);
    CHECK(a.times == b.times);
    REQUIRE(a.size() == 41);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a.times[k] == 3 + double(k) / 4);
    CHECK(a.state(0, 0) == 1.0);
    CHECK(a.state(0, 1) == 0.5);
}

TEST_CASE("divergence predicate stops the run") {
    const VectorField grow = [](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = y[0];
    };
    const auto t = integrate(grow, {1.0}, 0, 50, SolverSettings{}, 1,
                             [](double, std::span<const double> y) { return y[0] > 1e3; });
    CHECK(t.termination == Termination::Diverged);
    CHECK(t.termination_time == doctest::Approx(std::log(1e3)).epsilon(0.2));
    CHECK(t.times.back() <= t.termination_time);
    CHECK(t.size() == 7);

    const VectorField blowup = [](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = y[0] * y[0];
    };
    const auto u = integrate(blowup, {1.0}, 0, 2, SolverSettings{}, 10);
    CHECK(u.termination != Termination::Completed);
    CHECK(u.times.back() <= 1.0);
}

TEST_CASE("derived columns") {
    auto t = integrate(decay, {2.0}, 0, 2, SolverSettings{}, 1);
    t.attach_derived({"double", "time"}, [](double tt, std::span<const double> y, std::span<double> out) {
        out[0] = 2 * y[0];
        out[1] = tt;
    });
    CHECK(t.derived_value(0, "double") == 4.0);
    CHECK(t.derived_value(2, "time") == 2.0);
    CHECK(t.has_derived("time"));
    CHECK_FALSE(t.has_derived("other"));
    CHECK_THROWS_AS(t.derived_index("other"), std::out_of_range);
}

TEST_CASE("invalid arguments") {
    CHECK_THROWS(integrate(decay, {1.0}, 0, 1, SolverSettings{}, 0));
    CHECK_THROWS(integrate(decay, {1.0}, 1, 0, SolverSettings{}, 1));
    SolverSettings bad;
    bad.rtol = -1;
    CHECK_THROWS(integrate(decay, {1.0}, 0, 1, bad, 1));
    const VectorField nan_field = [](double, std::span<const double>, std::span<double> dy) {
        dy[0] = std::nan("");
    };
    CHECK_THROWS_AS(integrate(nan_field, {1.0}, 0, 1, SolverSettings{}, 1), NumericalError);
}

}
