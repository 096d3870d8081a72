#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gkclim/errors.hpp"
#include "gkclim/sampling.hpp"

namespace gkclim::sampling {

DirectionTable DirectionTable::parse(std::istream& in) {
    DirectionTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (!std::isdigit(static_cast<unsigned char>(line[first]))) {
            if (lineno == 1) continue;
            throw std::invalid_argument("direction table line " + std::to_string(lineno) +
                                        ": expected numbers");
        }
        std::istringstream row(line);
        DirectionRow r;
        if (!(row >> r.dimension >> r.degree >> r.coefficients))
            throw std::invalid_argument("direction table line " + std::to_string(lineno) +
                                        ": malformed header fields");
        r.initial.resize(r.degree);
        for (auto& m : r.initial)
            if (!(row >> m))
                throw std::invalid_argument("direction table line " + std::to_string(lineno) +
                                            ": too few direction numbers");
        if (r.dimension != table.rows_.size() + 2)
            throw std::invalid_argument("direction table line " + std::to_string(lineno) +
                                        ": dimensions must be consecutive from 2");
        if (r.degree == 0 || r.degree >= SobolSequence::kBits)
            throw std::invalid_argument("direction table line " + std::to_string(lineno) +
                                        ": unsupported polynomial degree");
        for (unsigned k = 0; k < r.degree; ++k) {
            const auto m = r.initial[k];
            if (m % 2 == 0 || m >= (std::uint32_t{1} << (k + 1)))
                throw std::invalid_argument("direction table line " + std::to_string(lineno) +
                                            ": m_i must be odd and below 2^i");
        }
        table.rows_.push_back(std::move(r));
    }
    return table;
}

DirectionTable DirectionTable::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse(in);
}

DirectionTable DirectionTable::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open direction table " + path);
    return parse(in);
}

const DirectionTable& DirectionTable::builtin() {
    static const DirectionTable table = parse(builtin_direction_text());
    return table;
}

SobolSequence::SobolSequence(std::size_t dimension, std::uint64_t skip,
                             const DirectionTable& table)
    : dimension_(dimension), directions_(dimension * kBits), state_(dimension, 0) {
    if (dimension == 0)
        throw NumericalError(NumericalError::Kind::DimensionUnsupported, "Sobol dimension must be >= 1");
    if (dimension > table.capacity())
        throw NumericalError(NumericalError::Kind::DimensionUnsupported,
                             "Sobol dimension " + std::to_string(dimension) +
                                 " exceeds the direction table (" +
                                 std::to_string(table.capacity()) + ")");
    for (std::size_t j = 0; j < dimension; ++j) {
        std::uint32_t* v = &directions_[j * kBits];
        if (j == 0) {
            for (unsigned k = 0; k < kBits; ++k) v[k] = std::uint32_t{1} << (kBits - 1 - k);
            continue;
        }
        const DirectionRow& row = table.rows()[j - 1];
        const unsigned s = row.degree;
        for (unsigned k = 0; k < s && k < kBits; ++k) v[k] = row.initial[k] << (kBits - 1 - k);
        for (unsigned k = s; k < kBits; ++k) {
            std::uint32_t x = v[k - s] ^ (v[k - s] >> s);
            for (unsigned l = 1; l < s; ++l)
                if ((row.coefficients >> (s - 1 - l)) & 1u) x ^= v[k - l];
            v[k] = x;
        }
    }
    seek(skip);
}

void SobolSequence::seek(std::uint64_t index) {
    if (index >= (std::uint64_t{1} << kBits))
        throw std::out_of_range("Sobol index beyond 2^32");
    const std::uint64_t gray = index ^ (index >> 1);
    for (std::size_t j = 0; j < dimension_; ++j) {
        std::uint32_t x = 0;
        for (unsigned k = 0; k < kBits; ++k)
            if ((gray >> k) & 1u) x ^= directions_[j * kBits + k];
        state_[j] = x;
    }
    index_ = index;
}

void SobolSequence::next(std::span<double> out) {
    if (out.size() != dimension_) throw std::invalid_argument("Sobol output size mismatch");
    constexpr double scale = 1.0 / 4294967296.0;
    for (std::size_t j = 0; j < dimension_; ++j) out[j] = state_[j] * scale;
    // Advance: flip the direction number of the lowest zero bit of the index.
    const auto c = static_cast<unsigned>(std::countr_one(index_));
    if (c >= kBits) throw std::out_of_range("Sobol sequence exhausted");
    for (std::size_t j = 0; j < dimension_; ++j) state_[j] ^= directions_[j * kBits + c];
    ++index_;
}

std::vector<double> SobolSequence::next() {
    std::vector<double> x(dimension_);
    next(x);
    return x;
}

std::vector<std::vector<double>> sobol_points(std::size_t dimension, std::size_t n,
                                              std::uint64_t skip) {
    SobolSequence seq(dimension, skip);
    std::vector<std::vector<double>> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pts.push_back(seq.next());
    return pts;
}

std::vector<std::vector<double>> scale_to_box(const std::vector<std::vector<double>>& points,
                                              std::span<const Interval> ranges) {
    for (const auto& r : ranges)
        if (!std::isfinite(r.lower) || !std::isfinite(r.upper) || !(r.lower < r.upper))
            throw std::invalid_argument("box ranges must be finite with lower < upper");
    std::vector<std::vector<double>> out;
    out.reserve(points.size());
    for (const auto& x : points) {
        if (x.size() != ranges.size()) throw std::invalid_argument("point/range dimension mismatch");
        std::vector<double> y(x.size());
        for (std::size_t j = 0; j < x.size(); ++j)
            y[j] = ranges[j].lower + (ranges[j].upper - ranges[j].lower) * x[j];
        out.push_back(std::move(y));
    }
    return out;
}

double l2_star_discrepancy(const std::vector<std::vector<double>>& points) {
    if (points.empty()) throw std::invalid_argument("discrepancy of an empty point set");
    const std::size_t n = points.size();
    const std::size_t dim = points.front().size();
    double single = 0;
    for (const auto& x : points) {
        double prod = 1;
        for (double v : x) prod *= (1 - v * v) / 2;
        single += prod;
    }
    double pair = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            double prod = 1;
            for (std::size_t j = 0; j < dim; ++j)
                prod *= 1 - std::max(points[i][j], points[k][j]);
            pair += prod;
        }
    const double nd = static_cast<double>(n);
    const double sq = std::pow(3.0, -static_cast<double>(dim)) - 2.0 / nd * single + pair / (nd * nd);
    return std::sqrt(std::max(sq, 0.0));
}

}  // namespace gkclim::sampling
