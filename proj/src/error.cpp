// SPDX-License-Identifier: Apache-2.0
#include "uno/error.hpp"

namespace uno {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::shape_mismatch: return "shape-mismatch";
    case ErrorKind::config_invalid: return "config-invalid";
    case ErrorKind::length_too_short: return "length-too-short";
    case ErrorKind::rate_too_low: return "rate-too-low";
    case ErrorKind::threshold_too_small: return "threshold-too-small";
    case ErrorKind::decomposition_failed: return "decomposition-failed";
    case ErrorKind::numerical_failure: return "numerical-failure";
    case ErrorKind::io: return "io";
    case ErrorKind::unknown_experiment: return "unknown-experiment";
  }
  return "unknown";
}

}  // namespace uno
