#pragma once

#include <stdexcept>
#include <string>

namespace snngb {

enum class ErrorCode {
    invalid_argument = 1,
    dimension_mismatch = 2,
    numerical = 3,
    io = 4,
    parse = 5,
};

// Base of every exception the core throws; the C layer maps `code()` onto
// snngb_status values.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& what) : Error(ErrorCode::invalid_argument, what) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& what) : Error(ErrorCode::dimension_mismatch, what) {}
};

// Non-finite values produced by a simulation or a gradient step.
struct NumericalError : Error {
    explicit NumericalError(const std::string& what) : Error(ErrorCode::numerical, what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(ErrorCode::parse, what) {}
};

const char* to_string(ErrorCode code) noexcept;

} // namespace snngb
