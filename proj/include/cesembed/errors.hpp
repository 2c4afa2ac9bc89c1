#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cesembed {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A subinterval or evaluation point lies outside a weight's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Exponents or other scalar parameters outside their admissible range.
class ParamError : public Error {
 public:
  using Error::Error;
};

// A space specification is malformed (quasi-norm condition violated, mismatched
// intervals, bad step function, ...).
class SpecError : public Error {
 public:
  using Error::Error;
};

// A weight transform would leave the closed-form expression family.
class UnsupportedWeightError : public Error {
 public:
  using Error::Error;
};

// A bound was requested outside the exponent range it is valid for.
class RegimeMisuseError : public Error {
 public:
  using Error::Error;
};

// The standing hypothesis on the right-hand weight fails, so the
// characterization does not apply.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

// Text input could not be parsed; `pos` is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(std::size_t pos, const std::string& what)
      : Error(what + " (at position " + std::to_string(pos) + ")"), pos(pos) {}
  std::size_t pos;
};

}  // namespace cesembed
