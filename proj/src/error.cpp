#include "thzra/error.hpp"

namespace thzra {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonIntegerShape: return "NonIntegerShape";
    case ErrorCode::ProfileMissing: return "ProfileMissing";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DegenerateParams: return "DegenerateParams";
    case ErrorCode::UnsupportedParams: return "UnsupportedParams";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::InsufficientTail: return "InsufficientTail";
    case ErrorCode::PartialRun: return "PartialRun";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
{
}

bool is_config_error(ErrorCode code)
{
    switch (code) {
    case ErrorCode::MissingField:
    case ErrorCode::OutOfRange:
    case ErrorCode::NonIntegerShape:
    case ErrorCode::ProfileMissing:
    case ErrorCode::UnsupportedParams:
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
        return true;
    default:
        return false;
    }
}

}  // namespace thzra
