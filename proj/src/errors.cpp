#include "sqz/errors.hpp"

namespace sqz {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidTruncation: return "invalid_truncation";
    case ErrorKind::ParametricInstability: return "parametric_instability";
    case ErrorKind::UnsupportedCombination: return "unsupported_combination";
    case ErrorKind::DimensionMismatch: return "dimension_mismatch";
    case ErrorKind::DegenerateSteadyState: return "degenerate_steady_state";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::GridTooShort: return "grid_too_short";
    case ErrorKind::DivergentNoise: return "divergent_noise";
    case ErrorKind::ResonanceDivergence: return "resonance_divergence";
    case ErrorKind::NoCrossing: return "no_crossing";
    case ErrorKind::GridEdge: return "grid_edge";
    case ErrorKind::ResourceLimit: return "resource_limit";
    case ErrorKind::InvalidConfig: return "invalid_config";
    }
    return "unknown";
}

} // namespace sqz
