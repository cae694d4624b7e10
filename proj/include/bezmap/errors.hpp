#pragma once

#include <stdexcept>
#include <string>

namespace bezmap {

// Base class for every recoverable failure raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Mismatched sizes, counts, or structural constraints.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Too few samples to determine a fit.
class UnderdeterminedError : public Error {
 public:
  using Error::Error;
};

// A curve needs more pieces than the configured maximum.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A sub-curve cannot meet the fitting tolerance even at minimal span.
class ToleranceError : public Error {
 public:
  using Error::Error;
};

// Malformed or unsupported input document.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Inconsistent configuration between inputs (e.g. taxonomy mismatch).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace bezmap
