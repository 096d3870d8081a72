#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gkclim/sampling.hpp"

namespace gkclim::sampling {

DistributionSpec DistributionSpec::normal(double mu, double sigma) {
    return {DistributionKind::Normal, mu, sigma, 1.0, Transform::None, 0.0, std::nullopt};
}

DistributionSpec DistributionSpec::lognormal(double mu_log, double sigma_log) {
    return {DistributionKind::LogNormal, mu_log, sigma_log, 1.0, Transform::None, 0.0,
            std::nullopt};
}

DistributionSpec DistributionSpec::generalized_gamma(double shape, double scale, double family) {
    return {DistributionKind::GeneralizedGamma, shape, scale, family, Transform::None, 0.0,
            std::nullopt};
}

DistributionSpec DistributionSpec::shifted(double c) const {
    DistributionSpec s = *this;
    s.transform = Transform::Shift;
    s.offset = c;
    return s;
}

DistributionSpec DistributionSpec::reflected(double c) const {
    DistributionSpec s = *this;
    s.transform = Transform::ReflectShift;
    s.offset = c;
    return s;
}

DistributionSpec DistributionSpec::clamped(double lower, double upper) const {
    DistributionSpec s = *this;
    s.clamp = Interval{lower, upper};
    return s;
}

void validate(const DistributionSpec& spec) {
    const bool ok = [&] {
        switch (spec.kind) {
            case DistributionKind::Normal:
            case DistributionKind::LogNormal: return std::isfinite(spec.a) && spec.b > 0;
            case DistributionKind::GeneralizedGamma:
                return spec.a > 0 && spec.b > 0 && spec.c > 0;
        }
        return false;
    }();
    if (!ok || !std::isfinite(spec.b) || !std::isfinite(spec.c) || !std::isfinite(spec.offset))
        throw std::invalid_argument("distribution parameters out of range");
    if (spec.clamp && !(spec.clamp->lower <= spec.clamp->upper))
        throw std::invalid_argument("clamp interval is empty");
}

double draw(const DistributionSpec& spec, std::mt19937_64& rng) {
    double x = 0;
    switch (spec.kind) {
        case DistributionKind::Normal:
            x = std::normal_distribution<double>(spec.a, spec.b)(rng);
            break;
        case DistributionKind::LogNormal:
            x = std::lognormal_distribution<double>(spec.a, spec.b)(rng);
            break;
        case DistributionKind::GeneralizedGamma: {
            const double g = std::gamma_distribution<double>(spec.a, 1.0)(rng);
            x = spec.b * std::pow(g, 1.0 / spec.c);
            break;
        }
    }
    switch (spec.transform) {
        case Transform::None: break;
        case Transform::Shift: x += spec.offset; break;
        case Transform::ReflectShift: x = spec.offset - x; break;
    }
    if (spec.clamp) x = std::clamp(x, spec.clamp->lower, spec.clamp->upper);
    return x;
}

std::vector<double> sample(const DistributionSpec& spec, std::mt19937_64& rng, std::size_t n) {
    validate(spec);
    std::vector<double> out(n);
    for (auto& x : out) x = draw(spec, rng);
    return out;
}

std::vector<NamedDistribution> empirical_distributions() {
    using D = DistributionSpec;
    return {
        {"markup", D::generalized_gamma(3.0894, 0.7154, 0.9959).shifted(1.0)},
        {"inflation_relaxation", D::normal(0.4, 0.12)},
        {"money_illusion", D::generalized_gamma(6.2327, 0.0033, 0.3158).reflected(1.0).clamped(0, 1)},
        {"productivity_growth", D::normal(0.0206, 0.0112)},
        {"climate_sensitivity", D::lognormal(1.107, 0.264)},
        {"preind_carbon_up", D::lognormal(5.886, 0.251)},
    };
}

std::vector<NamedDistribution> distributions_for(Variant v) {
    auto all = empirical_distributions();
    if (v == Variant::Reduced) all.resize(4);
    return all;
}

std::mt19937_64 run_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace gkclim::sampling
