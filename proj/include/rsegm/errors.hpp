// Copyright 2026 The rsegm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rsegm {

// Base class for every error raised by the library. Callers that only care
// about "something went wrong" catch this; the subclasses below let the CLI
// map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Index out of range, dimension mismatch, malformed structure.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Invalid user-supplied parameter (shape, density, probability, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Sampling distribution with no positive mass.
class InvalidDistributionError : public Error {
 public:
  using Error::Error;
};

// A dense computation was requested above its desk-scale guard.
class UnsupportedSizeError : public Error {
 public:
  using Error::Error;
};

// Operation not defined for this problem form.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// The optimal set is empty (inconsistent linear systems).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Random instance generation exhausted its retries.
class GenerationError : public Error {
 public:
  using Error::Error;
};

// Iterative numerical routine failed to meet its tolerance.
class ToleranceError : public Error {
 public:
  using Error::Error;
};

// Fewer usable data points than a fit needs.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// File could not be read, written, or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

// A non-finite coordinate appeared during a solver run.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::int64_t step)
      : Error(what), step_(step) {}

  std::int64_t step() const { return step_; }

 private:
  std::int64_t step_;
};

}  // namespace rsegm
