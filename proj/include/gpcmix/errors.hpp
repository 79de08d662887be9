/*
 * This code is part of gpcmix.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef GPCMIX_ERRORS_HPP
#define GPCMIX_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gpcmix {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// expression language
struct SyntaxError : Error {
  std::size_t offset;  // byte offset into the input text
  SyntaxError(const std::string& msg, std::size_t off)
      : Error(msg + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};
struct DomainError : Error {
  using Error::Error;
};
struct EvalOverflow : Error {
  using Error::Error;
};

// linear algebra
struct NotHermitian : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};

// bases and operator families
struct UnsupportedDimension : Error {
  using Error::Error;
};
struct NotOrthonormal : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};

// channels
struct BadState : Error {
  using Error::Error;
};
struct BadTime : Error {
  using Error::Error;
};
struct BadChannel : Error {
  using Error::Error;
};
struct WeightError : Error {
  using Error::Error;
};
struct FamilyMismatch : Error {
  using Error::Error;
};
struct RangeError : Error {
  using Error::Error;
};

// analysis
struct NotDecomposable : Error {
  using Error::Error;
};
struct RateInequalityViolated : Error {
  int beta;  // 1-based index of the offending rate
  RateInequalityViolated(const std::string& msg, int b) : Error(msg), beta(b) {}
};
struct RateOrderError : Error {
  using Error::Error;
};

}  // namespace gpcmix

#endif
