#pragma once

#include <stdexcept>
#include <string>

namespace wsi {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// malformed input file (carries the offending line number in the message)
struct ParseError : Error {
  using Error::Error;
};

// structurally well-formed input that violates a data invariant
struct ValidationError : Error {
  using Error::Error;
};

// bad hyperparameters / CLI configuration
struct ConfigError : Error {
  using Error::Error;
};

// corrupted or truncated state snapshot
struct DecodeError : Error {
  using Error::Error;
};

// filesystem failures
struct IoError : Error {
  using Error::Error;
};

}  // namespace wsi
