#pragma once

#include <stdexcept>
#include <string>

namespace qgeo {

// Bad request: jet budget, unknown scene, out-of-range parameters. The CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Singular metric, degenerate frame, non-finite value.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Misuse of the tensor API (kind mismatch, bad slot list).
struct UsageError : std::logic_error {
  using std::logic_error::logic_error;
};

// Invariant evaluated outside the (k, n) range where it is defined.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

}  // namespace qgeo
