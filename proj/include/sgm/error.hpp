#pragma once

#include <stdexcept>
#include <string>

namespace sgm {

enum class ErrorCode {
  invalid_argument,
  realization_mismatch,
  grid_mismatch,
  unsupported_kind,
  unsupported_realization,
  invalid_group_element,
  nonpositive_density,
  nonzero_mean,
  singular_parameters,
  fixed_point_diverged,
  cfl_violation,
  bad_magic,
  version_mismatch,
  truncated_payload,
  dimension_overflow,
  io_failure,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument:        return "invalid_argument";
    case ErrorCode::realization_mismatch:    return "realization_mismatch";
    case ErrorCode::grid_mismatch:           return "grid_mismatch";
    case ErrorCode::unsupported_kind:        return "unsupported_kind";
    case ErrorCode::unsupported_realization: return "unsupported_realization";
    case ErrorCode::invalid_group_element:   return "invalid_group_element";
    case ErrorCode::nonpositive_density:     return "nonpositive_density";
    case ErrorCode::nonzero_mean:            return "nonzero_mean";
    case ErrorCode::singular_parameters:     return "singular_parameters";
    case ErrorCode::fixed_point_diverged:    return "fixed_point_diverged";
    case ErrorCode::cfl_violation:           return "cfl_violation";
    case ErrorCode::bad_magic:               return "bad_magic";
    case ErrorCode::version_mismatch:        return "version_mismatch";
    case ErrorCode::truncated_payload:       return "truncated_payload";
    case ErrorCode::dimension_overflow:      return "dimension_overflow";
    case ErrorCode::io_failure:              return "io_failure";
  }
  return "unknown";
}

/// Exception type carrying a machine-checkable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sgm
