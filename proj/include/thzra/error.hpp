#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace thzra {

enum class ErrorCode {
    MissingField,
    OutOfRange,
    NonIntegerShape,
    ProfileMissing,
    DomainError,
    DegenerateParams,
    UnsupportedParams,
    EmptySample,
    InsufficientTail,
    PartialRun,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; the code carries the category.
class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

// True for errors that stem from user-supplied configuration.
bool is_config_error(ErrorCode code);

}  // namespace thzra
