#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gkclim {

/// Right-hand side dy/dt = f(t, y). Writes into `dydt`, which has the size of `y`.
using VectorField =
    std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Evaluated after every accepted step; returning true stops the run.
using DivergencePredicate = std::function<bool(double t, std::span<const double> y)>;

struct SolverSettings {
    double rtol = 1e-8;
    double atol = 1e-10;
    double initial_step = 0.0;  // 0 selects the step automatically
    double max_step = 1.0;      // years
    std::size_t max_steps = 2'000'000;
};

enum class Termination { Completed, Diverged, StepFailure };

const char* to_string(Termination t) noexcept;

struct StepStatistics {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t evaluations = 0;
};

/// Solution sampled on the reporting grid t0 + k/steps_per_year.
///
/// `states` is row-major with `dimension` columns, one row per reported time.
/// Models may attach derived quantities (ratios, emissions, ...) as additional
/// named columns in `derived`, also row-major.
struct Trajectory {
    std::vector<double> times;
    std::size_t dimension = 0;
    std::vector<double> states;
    std::vector<std::string> derived_names;
    std::vector<double> derived;
    Termination termination = Termination::Completed;
    double termination_time = 0.0;
    StepStatistics stats;

    std::size_t size() const noexcept { return times.size(); }
    bool empty() const noexcept { return times.empty(); }

    std::span<const double> state(std::size_t row) const {
        return {states.data() + row * dimension, dimension};
    }
    double state(std::size_t row, std::size_t col) const { return states[row * dimension + col]; }

    /// Index of a derived column; throws std::out_of_range if absent.
    std::size_t derived_index(std::string_view name) const;
    bool has_derived(std::string_view name) const;
    double derived_value(std::size_t row, std::string_view name) const;
    double derived_value(std::size_t row, std::size_t col) const {
        return derived[row * derived_names.size() + col];
    }

    /// Fills `derived` by evaluating `fn(t, state, out)` on every row.
    void attach_derived(
        std::vector<std::string> names,
        const std::function<void(double, std::span<const double>, std::span<double>)>& fn);
};

/// Adaptive Dormand–Prince 5(4) integration with PI step-size control.
/// States between steps are obtained from the pair's 4th-order continuous
/// extension. The predicate is checked after every accepted step; when it
/// fires, the grid points already passed are kept and the run stops.
///
/// Throws NumericalError(StepFailure) only if the first evaluation at `y0`
/// is non-finite; step-size underflow during the run is reported through
/// `Trajectory::termination`.
Trajectory integrate(const VectorField& field, std::vector<double> y0, double t0, double t_end,
                     const SolverSettings& settings, int steps_per_year,
                     const DivergencePredicate& diverged = {});

}  // namespace gkclim
