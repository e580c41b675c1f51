// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace uno {

enum class ErrorKind {
  invalid_parameter,
  shape_mismatch,
  config_invalid,
  length_too_short,
  rate_too_low,
  threshold_too_small,
  decomposition_failed,
  numerical_failure,
  io,
  unknown_experiment,
};

const char* to_string(ErrorKind kind) noexcept;

/// Library error. `kind()` is the stable category; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) throw Error(kind, what);
}

}  // namespace uno
