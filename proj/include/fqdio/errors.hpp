#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fqdio {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A norm or coefficient could not be certified from the known digits.
class PrecisionExhausted : public Error {
 public:
  explicit PrecisionExhausted(const std::string& what, long produced = -1)
      : Error("precision exhausted: " + what), produced_(produced) {}
  /// Number of items (e.g. partial quotients) produced before running out, or -1.
  long produced() const { return produced_; }

 private:
  long produced_;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t pos)
      : Error("syntax error at position " + std::to_string(pos) + ": " + what), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class CoefficientOutOfRange : public Error {
 public:
  CoefficientOutOfRange(const std::string& what, std::size_t pos)
      : Error("coefficient out of range at position " + std::to_string(pos) + ": " + what), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class SearchBudgetExceeded : public Error {
 public:
  SearchBudgetExceeded(std::uint64_t required, std::uint64_t budget)
      : Error("search budget exceeded: need " + std::to_string(required) + " candidates, budget " +
              std::to_string(budget)),
        required_(required) {}
  std::uint64_t required() const { return required_; }

 private:
  std::uint64_t required_;
};

/// Box enumeration could not certify completeness; `required_bound` suffices.
class SearchIncomplete : public Error {
 public:
  explicit SearchIncomplete(int required_bound)
      : Error("successive minima not certified; degree bound " + std::to_string(required_bound) +
              " required"),
        required_(required_bound) {}
  int required_bound() const { return required_; }

 private:
  int required_;
};

class WitnessNotFound : public Error {
 public:
  using Error::Error;
};

class InsufficientDepth : public Error {
 public:
  explicit InsufficientDepth(long required_moves)
      : Error("transcript too short; " + std::to_string(required_moves) + " moves required"),
        required_(required_moves) {}
  long required_moves() const { return required_; }

 private:
  long required_;
};

class BranchOutOfRange : public Error {
 public:
  using Error::Error;
};

class CounterexampleFound : public Error {
 public:
  CounterexampleFound(const std::string& q, long score_exp)
      : Error("counterexample q = " + q), q_(q), score_exp_(score_exp) {}
  const std::string& q() const { return q_; }
  long score_exponent() const { return score_exp_; }

 private:
  std::string q_;
  long score_exp_;
};

}  // namespace fqdio
