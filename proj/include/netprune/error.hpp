#pragma once

#include <stdexcept>
#include <string>

namespace netprune {

// Base of every error the library throws. Subclasses map one-to-one onto
// the CLI exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-domain input (bad radius, dimension mismatch, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

// The problem parameters admit no answer (k too large, family never
// satisfied, context exhausted by pruning).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// A decider or sampler broke its contract, or the driver hit its
// iteration cap. Always a bug in a plugin or a violated precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

// A randomized subroutine's precondition did not hold for this draw; the
// caller is expected to retry with fresh randomness.
class RetryableFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace netprune
