#pragma once

#include <stdexcept>
#include <string>

namespace cachenet {

enum class ErrorCode {
  invalid_connectivity,
  index_out_of_range,
  unsupported_topology,
  divisibility,
  invalid_level,
  not_applicable,
  coverage,
  out_of_region,
  infeasible,
  size_cap_exceeded,
  invalid_argument,
  internal,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_connectivity: return "invalid-connectivity";
    case ErrorCode::index_out_of_range: return "index-out-of-range";
    case ErrorCode::unsupported_topology: return "unsupported-topology";
    case ErrorCode::divisibility: return "divisibility";
    case ErrorCode::invalid_level: return "invalid-level";
    case ErrorCode::not_applicable: return "not-applicable";
    case ErrorCode::coverage: return "coverage";
    case ErrorCode::out_of_region: return "out-of-region";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::size_cap_exceeded: return "size-cap-exceeded";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

/// Single exception type for the library; `code()` tells callers (and the CLI
/// exit-code mapping) which contract was broken.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cachenet
