#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gkclim/parameters.hpp"

namespace gkclim::sampling {

/// One row of a Joe–Kuo style table: dimension, polynomial degree s,
/// coefficient bits a and the initial direction numbers m_1..m_s.
struct DirectionRow {
    unsigned dimension = 0;
    unsigned degree = 0;
    std::uint32_t coefficients = 0;
    std::vector<std::uint32_t> initial;
};

class DirectionTable {
public:
    /// Text layout "d s a m_1 ... m_s", one dimension per line starting at 2.
    /// A non-numeric first line is taken as a header.
    static DirectionTable parse(std::istream& in);
    static DirectionTable parse(std::string_view text);
    static DirectionTable from_file(const std::string& path);
    /// Embedded table for 64 dimensions.
    static const DirectionTable& builtin();

    /// Number of dimensions supported, including the implicit first one.
    std::size_t capacity() const { return rows_.size() + 1; }
    const std::vector<DirectionRow>& rows() const { return rows_; }

private:
    std::vector<DirectionRow> rows_;
};

std::string_view builtin_direction_text();

/// Unscrambled Sobol sequence, Gray-code order, 32-bit resolution.
class SobolSequence {
public:
    static constexpr unsigned kBits = 32;

    /// `skip` leading points are dropped (default: the origin).
    explicit SobolSequence(std::size_t dimension, std::uint64_t skip = 1,
                           const DirectionTable& table = DirectionTable::builtin());

    std::size_t dimension() const { return dimension_; }
    /// Sequence index of the next point to be emitted.
    std::uint64_t index() const { return index_; }

    void next(std::span<double> out);
    std::vector<double> next();
    /// Positions the sequence so that the next emitted point has index `index`.
    void seek(std::uint64_t index);

private:
    std::size_t dimension_;
    std::uint64_t index_ = 0;
    std::vector<std::uint32_t> directions_;  // dimension_ x kBits
    std::vector<std::uint32_t> state_;
};

/// First n points after skipping `skip` leading points.
std::vector<std::vector<double>> sobol_points(std::size_t dimension, std::size_t n,
                                              std::uint64_t skip = 1);

/// Affine map of unit-cube points onto per-dimension ranges. Throws
/// std::invalid_argument on non-finite or empty ranges or a dimension mismatch.
std::vector<std::vector<double>> scale_to_box(const std::vector<std::vector<double>>& points,
                                              std::span<const Interval> ranges);

/// L2-star discrepancy (Warnock's closed form).
double l2_star_discrepancy(const std::vector<std::vector<double>>& points);

enum class DistributionKind { Normal, LogNormal, GeneralizedGamma };
enum class Transform { None, Shift, ReflectShift };

/// Normal(a = mu, b = sigma); LogNormal(a = mu_log, b = sigma_log);
/// GeneralizedGamma(a = shape s, b = scale m, c = family f), drawn as m·G^(1/f)
/// with G ~ Gamma(s, 1). Shift maps x to x + offset, ReflectShift to offset - x.
/// The clamp is applied last.
struct DistributionSpec {
    DistributionKind kind = DistributionKind::Normal;
    double a = 0;
    double b = 1;
    double c = 1;
    Transform transform = Transform::None;
    double offset = 0;
    std::optional<Interval> clamp;

    static DistributionSpec normal(double mu, double sigma);
    static DistributionSpec lognormal(double mu_log, double sigma_log);
    static DistributionSpec generalized_gamma(double shape, double scale, double family);
    DistributionSpec shifted(double c) const;
    DistributionSpec reflected(double c) const;
    DistributionSpec clamped(double lower, double upper) const;
};

/// Throws std::invalid_argument if a scale or shape parameter is not positive.
void validate(const DistributionSpec& spec);

double draw(const DistributionSpec& spec, std::mt19937_64& rng);
std::vector<double> sample(const DistributionSpec& spec, std::mt19937_64& rng, std::size_t n);

struct NamedDistribution {
    std::string parameter;  // canonical ParamSet field name
    DistributionSpec spec;
};

/// Fitted uncertainty distributions for markup, inflation relaxation, money
/// illusion, productivity growth, climate sensitivity and upper-ocean carbon.
std::vector<NamedDistribution> empirical_distributions();

/// The economic four for the reduced model; all six otherwise.
std::vector<NamedDistribution> distributions_for(Variant v);

/// Independent generator for run `index` of an experiment seeded with `seed`.
std::mt19937_64 run_rng(std::uint64_t seed, std::uint64_t index);

}  // namespace gkclim::sampling
