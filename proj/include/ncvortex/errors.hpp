#pragma once

#include <stdexcept>
#include <string>

namespace ncvortex {

enum class ErrorKind {
    OddGridSize,
    GridTooSmall,
    NonPositiveExtent,
    EmptyAnnulus,
    DegenerateFit,
    NoConvergence,
    InvalidWinding,
    GridLargerThanProfile,
    NonRealField,
    GridMismatch,
    MissingLowerOrder,
    MaskTooSmall,
    DomainError,
    NotSPD,
    SeriesOverflow,
    InvalidArgument,
    IoError,
    ConfigError,
    StageFailure,
    SchemaMismatch,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace ncvortex
