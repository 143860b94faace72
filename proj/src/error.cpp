#include "aad/error.hpp"

namespace aad {

const char* to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::not_positive_definite: return "NotPositiveDefinite";
    case ErrorCode::segment_too_short: return "SegmentTooShort";
    case ErrorCode::malformed_file: return "MalformedFile";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::invalid_probability: return "InvalidProbability";
    case ErrorCode::invalid_config: return "InvalidConfig";
    case ErrorCode::plan_infeasible: return "PlanInfeasible";
    }
    return "Unknown";
}

} // namespace aad
