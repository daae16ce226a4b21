#pragma once

#include <stdexcept>
#include <string>

namespace gpm {

// Process exit codes shared by the CLI and the error hierarchy.
enum class ExitCode : int {
  ok = 0,
  check_negative = 1,
  usage = 2,
  no_convergence = 3,
  connectivity = 4,
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, ExitCode code = ExitCode::usage)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

// Violated precondition or malformed input.
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(what, ExitCode::usage) {}
};

}  // namespace gpm
