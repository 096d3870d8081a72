#include "gkclim/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gkclim/errors.hpp"

namespace gkclim {

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;

// Difference between the 5th and embedded 4th order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// Continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;   // largest decrease is h/5
constexpr double kFacMax = 10.0;  // largest increase is 10h
constexpr double kBeta = 0.04;    // PI stabilisation
constexpr double kMinStep = 1e-12;

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

class DormandPrince {
public:
    DormandPrince(const VectorField& f, std::size_t n, StepStatistics& stats)
        : f_(f), stats_(stats), k1_(n), k2_(n), k3_(n), k4_(n), k5_(n), k6_(n), k7_(n),
          ytmp_(n), ynew_(n), cont_(5 * n), n_(n) {}

    void eval(double t, std::span<const double> y, std::vector<double>& out) {
        ++stats_.evaluations;
        f_(t, y, out);
    }

    // Hairer & Wanner's starting step heuristic.
    double initial_step(double t, const std::vector<double>& y, const SolverSettings& s,
                        double hmax) {
        double dnf = 0, dny = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double sk = s.atol + s.rtol * std::abs(y[i]);
            dnf += (k1_[i] / sk) * (k1_[i] / sk);
            dny += (y[i] / sk) * (y[i] / sk);
        }
        double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
        h = std::min(h, hmax);
        for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y[i] + h * k1_[i];
        eval(t + h, ytmp_, k2_);
        double der2 = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double sk = s.atol + s.rtol * std::abs(y[i]);
            const double v = (k2_[i] - k1_[i]) / sk;
            der2 += v * v;
        }
        der2 = std::sqrt(der2) / h;
        const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
        const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3)
                                          : std::pow(0.01 / der12, 0.2);
        return std::min({100 * h, h1, hmax});
    }

    // One trial step from (t, y) with FSAL derivative k1_. Returns the scaled
    // error norm, or +inf if a stage produced non-finite values.
    double attempt(double t, const std::vector<double>& y, double h, const SolverSettings& s) {
        for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y[i] + h * a21 * k1_[i];
        eval(t + c2 * h, ytmp_, k2_);
        for (std::size_t i = 0; i < n_; ++i)
            ytmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
        eval(t + c3 * h, ytmp_, k3_);
        for (std::size_t i = 0; i < n_; ++i)
            ytmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
        eval(t + c4 * h, ytmp_, k4_);
        for (std::size_t i = 0; i < n_; ++i)
            ytmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
        eval(t + c5 * h, ytmp_, k5_);
        for (std::size_t i = 0; i < n_; ++i)
            ytmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] +
                                   a65 * k5_[i]);
        eval(t + h, ytmp_, k6_);
        for (std::size_t i = 0; i < n_; ++i)
            ynew_[i] = y[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] +
                                   a76 * k6_[i]);
        eval(t + h, ynew_, k7_);

        double err = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double sk = s.atol + s.rtol * std::max(std::abs(y[i]), std::abs(ynew_[i]));
            const double e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                                  e6 * k6_[i] + e7 * k7_[i]) / sk;
            err += e * e;
        }
        err = std::sqrt(err / static_cast<double>(n_));
        if (!std::isfinite(err) || !all_finite(ynew_) || !all_finite(k7_))
            return std::numeric_limits<double>::infinity();
        return err;
    }

    void build_dense(const std::vector<double>& y, double h) {
        for (std::size_t i = 0; i < n_; ++i) {
            const double dy = ynew_[i] - y[i];
            const double bspl = h * k1_[i] - dy;
            cont_[i] = y[i];
            cont_[n_ + i] = dy;
            cont_[2 * n_ + i] = bspl;
            cont_[3 * n_ + i] = dy - h * k7_[i] - bspl;
            cont_[4 * n_ + i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] +
                                     d6 * k6_[i] + d7 * k7_[i]);
        }
    }

    void dense(double theta, std::span<double> out) const {
        const double theta1 = 1.0 - theta;
        for (std::size_t i = 0; i < n_; ++i) {
            out[i] = cont_[i] +
                     theta * (cont_[n_ + i] +
                              theta1 * (cont_[2 * n_ + i] +
                                        theta * (cont_[3 * n_ + i] + theta1 * cont_[4 * n_ + i])));
        }
    }

    std::vector<double>& k1() { return k1_; }
    std::vector<double>& k7() { return k7_; }
    std::vector<double>& ynew() { return ynew_; }

private:
    const VectorField& f_;
    StepStatistics& stats_;
    std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, ynew_, cont_;
    std::size_t n_;
};

}  // namespace

const char* to_string(Termination t) noexcept {
    switch (t) {
        case Termination::Completed: return "completed";
        case Termination::Diverged: return "diverged";
        case Termination::StepFailure: return "step_failure";
    }
    return "unknown";
}

std::size_t Trajectory::derived_index(std::string_view name) const {
    const auto it = std::find(derived_names.begin(), derived_names.end(), name);
    if (it == derived_names.end())
        throw std::out_of_range("trajectory has no derived column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - derived_names.begin());
}

bool Trajectory::has_derived(std::string_view name) const {
    return std::find(derived_names.begin(), derived_names.end(), name) != derived_names.end();
}

double Trajectory::derived_value(std::size_t row, std::string_view name) const {
    return derived_value(row, derived_index(name));
}

void Trajectory::attach_derived(
    std::vector<std::string> names,
    const std::function<void(double, std::span<const double>, std::span<double>)>& fn) {
    derived_names = std::move(names);
    const std::size_t m = derived_names.size();
    derived.assign(size() * m, 0.0);
    for (std::size_t r = 0; r < size(); ++r)
        fn(times[r], state(r), std::span<double>(derived.data() + r * m, m));
}

Trajectory integrate(const VectorField& field, std::vector<double> y0, double t0,
                     double t_end, const SolverSettings& settings, int steps_per_year,
                     const DivergencePredicate& diverged) {
    if (!(settings.rtol > 0) || !(settings.atol > 0))
        throw std::invalid_argument("solver tolerances must be positive");
    if (steps_per_year < 1) throw std::invalid_argument("steps_per_year must be >= 1");
    if (!(t_end > t0)) throw std::invalid_argument("integration interval must be non-empty");

    const std::size_t n = y0.size();
    Trajectory traj;
    traj.dimension = n;

    // Grid times are t0 + k/steps_per_year with k an integer.
    const auto grid_count = static_cast<std::size_t>(
        std::floor((t_end - t0) * steps_per_year + 1e-9)) + 1;
    const double spy = static_cast<double>(steps_per_year);
    auto grid_time = [&](std::size_t k) { return t0 + static_cast<double>(k) / spy; };
    const double t_stop = grid_time(grid_count - 1);
    traj.times.reserve(grid_count);
    traj.states.reserve(grid_count * n);

    DormandPrince rk(field, n, traj.stats);
    std::vector<double> y = std::move(y0);
    double t = t0;
    rk.eval(t, y, rk.k1());
    if (!all_finite(y) || !all_finite(rk.k1()))
        throw NumericalError(NumericalError::Kind::StepFailure,
                             "vector field is not finite at the initial state");

    traj.times.push_back(t0);
    traj.states.insert(traj.states.end(), y.begin(), y.end());
    std::size_t next_k = 1;
    if (diverged && diverged(t, y)) {
        traj.termination = Termination::Diverged;
        traj.termination_time = t;
        return traj;
    }

    const double hmax = settings.max_step > 0 ? settings.max_step : (t_stop - t0);
    double h = settings.initial_step > 0 ? std::min(settings.initial_step, hmax)
                                         : rk.initial_step(t, y, settings, hmax);
    double facold = 1e-4;
    bool last_rejected = false;
    std::vector<double> row(n);

    while (next_k < grid_count) {
        if (traj.stats.accepted + traj.stats.rejected >= settings.max_steps || h < kMinStep) {
            traj.termination = Termination::StepFailure;
            traj.termination_time = t;
            return traj;
        }
        bool last = false;
        if (t + 1.01 * h >= t_stop) {
            h = t_stop - t;
            last = true;
        }

        const double err = rk.attempt(t, y, h, settings);
        if (!std::isfinite(err)) {
            ++traj.stats.rejected;
            h *= kFacMin;
            last_rejected = true;
            continue;
        }

        const double fac11 = std::pow(err, 0.2 - 0.75 * kBeta);
        if (err <= 1.0) {
            double fac = fac11 / std::pow(facold, kBeta);
            fac = std::clamp(fac / kSafety, 1.0 / kFacMax, 1.0 / kFacMin);
            double hnew = h / fac;
            facold = std::max(err, 1e-4);
            ++traj.stats.accepted;

            rk.build_dense(y, h);
            const double t_new = last ? t_stop : t + h;
            while (next_k < grid_count && grid_time(next_k) <= t_new) {
                const double tk = grid_time(next_k);
                const double theta = (tk - t) / h;
                if (next_k == grid_count - 1 && last) {
                    row = rk.ynew();
                } else {
                    rk.dense(theta, row);
                }
                traj.times.push_back(tk);
                traj.states.insert(traj.states.end(), row.begin(), row.end());
                ++next_k;
            }

            y.swap(rk.ynew());
            rk.k1().swap(rk.k7());
            t = t_new;

            if (diverged && diverged(t, y)) {
                traj.termination = Termination::Diverged;
                traj.termination_time = t;
                return traj;
            }

            hnew = std::min(std::abs(hnew), hmax);
            if (last_rejected) hnew = std::min(hnew, h);
            last_rejected = false;
            h = hnew;
        } else {
            h /= std::min(1.0 / kFacMin, fac11 / kSafety);
            ++traj.stats.rejected;
            last_rejected = true;
        }
    }
    traj.termination = Termination::Completed;
    traj.termination_time = t;
    return traj;
}

}  // namespace gkclim
