#pragma once

#include <stdexcept>
#include <string>

namespace aad {

enum class ErrorCode {
    invalid_argument,
    dimension_mismatch,
    not_positive_definite,
    segment_too_short,
    malformed_file,
    io_error,
    invalid_probability,
    invalid_config,
    plan_infeasible,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure in the library surfaces as an Error carrying a code that
/// the C API maps onto its status enum.
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), _code(code)
    {}

    ErrorCode code() const noexcept { return _code; }

private:
    ErrorCode _code;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what)
{
    throw Error(code, what);
}

} // namespace aad
