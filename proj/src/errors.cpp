#include "ncvortex/errors.hpp"

namespace ncvortex {

const char* to_string(ErrorKind k)
{
    switch (k) {
    case ErrorKind::OddGridSize: return "OddGridSize";
    case ErrorKind::GridTooSmall: return "GridTooSmall";
    case ErrorKind::NonPositiveExtent: return "NonPositiveExtent";
    case ErrorKind::EmptyAnnulus: return "EmptyAnnulus";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::InvalidWinding: return "InvalidWinding";
    case ErrorKind::GridLargerThanProfile: return "GridLargerThanProfile";
    case ErrorKind::NonRealField: return "NonRealField";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::MissingLowerOrder: return "MissingLowerOrder";
    case ErrorKind::MaskTooSmall: return "MaskTooSmall";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NotSPD: return "NotSPD";
    case ErrorKind::SeriesOverflow: return "SeriesOverflow";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::StageFailure: return "StageFailure";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    }
    return "Unknown";
}

} // namespace ncvortex
