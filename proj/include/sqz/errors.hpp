#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sqz {

/// Machine-readable error categories; the CLI reports them verbatim.
enum class ErrorKind {
    InvalidTruncation,
    ParametricInstability,
    UnsupportedCombination,
    DimensionMismatch,
    DegenerateSteadyState,
    Convergence,
    GridTooShort,
    DivergentNoise,
    ResonanceDivergence,
    NoCrossing,
    GridEdge,
    ResourceLimit,
    InvalidConfig,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace sqz
