#pragma once

#include <stdexcept>
#include <string>

namespace fracord {

enum class ErrorCode {
    Domain = 1,
    NoConvergence = 2,
    Fit = 3,
    Signal = 4,
    Grid = 5,
    Unsupported = 6,
    Overflow = 7,
};

// Single exception type for the whole library.  code() maps 1:1 onto the
// status values of the C interface.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace fracord
