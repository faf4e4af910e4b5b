#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace modbasis {

// Base of every error raised by the library. The CLI maps subclasses onto
// exit codes, so each failure mode gets its own type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Asked for a coefficient at or beyond a series' precision bound.
class PrecisionExceeded : public Error {
 public:
  PrecisionExceeded(std::int64_t exponent, std::int64_t prec)
      : Error("coefficient of q^" + std::to_string(exponent) +
              " requested but series is only known below q^" + std::to_string(prec)),
        exponent_(exponent),
        prec_(prec) {}
  std::int64_t exponent() const noexcept { return exponent_; }
  std::int64_t prec() const noexcept { return prec_; }

 private:
  std::int64_t exponent_;
  std::int64_t prec_;
};

class ZeroLeadingTerm : public Error {
 public:
  ZeroLeadingTerm() : Error("series is zero to its precision; cannot invert") {}
};

// A comparison needed more terms than the inputs carry. `required` is the
// smallest precision that would have sufficed, or -1 when unknown.
class InsufficientPrecision : public Error {
 public:
  explicit InsufficientPrecision(const std::string& what, std::int64_t required = -1)
      : Error(what), required_(required) {}
  std::int64_t required() const noexcept { return required_; }

 private:
  std::int64_t required_;
};

class FractionalValuation : public Error {
 public:
  FractionalValuation(std::string term, std::string offset)
      : Error("eta quotient term " + term + " has non-integral q-offset " + offset),
        term_(std::move(term)),
        offset_(std::move(offset)) {}
  const std::string& term() const noexcept { return term_; }
  const std::string& offset() const noexcept { return offset_; }

 private:
  std::string term_;
  std::string offset_;
};

class MixedWeight : public Error {
 public:
  using Error::Error;
};

class InvalidCusp : public Error {
 public:
  using Error::Error;
};

class UnsupportedLevel : public Error {
 public:
  explicit UnsupportedLevel(std::int64_t level)
      : Error("level " + std::to_string(level) + " is not supported (expected 6, 10, 12 or 18)"),
        level_(level) {}
  std::int64_t level() const noexcept { return level_; }

 private:
  std::int64_t level_;
};

class IndexBelowRange : public Error {
 public:
  using Error::Error;
};

class IntegralityViolation : public Error {
 public:
  using Error::Error;
};

class UnsupportedPair : public Error {
 public:
  using Error::Error;
};

class NoConsistentSign : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace modbasis
