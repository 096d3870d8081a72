#pragma once

#include <stdexcept>
#include <string>

namespace gkclim {

/// Bad configuration input: unknown keys, malformed values, failed validation.
/// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failures of the numerics (degenerate model states, solver breakdown,
/// unsolvable equilibrium conditions). The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
    enum class Kind {
        NoInteriorEquilibrium,
        KappaNotInvertible,
        PhillipsNotInvertible,
        MoneyIllusionSingular,
        DegenerateOutput,
        StepFailure,
        YearNotCovered,
        DimensionUnsupported,
        ZeroVariance,
        InsufficientData,
        SingleClass,
        Separation,
        InvalidArgument,
    };

    NumericalError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

const char* to_string(NumericalError::Kind kind) noexcept;

}  // namespace gkclim
