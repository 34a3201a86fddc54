#pragma once

#include <cstdint>
#include <exception>
#include <stdexcept>
#include <string>

namespace aolab {

/// Malformed experiment configuration or command-line input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Class-file or history-text parse failure. `line` is 0 when unknown.
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& field,
             const std::string& message);

  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Action or observation symbol outside an environment's alphabet.
class AlphabetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No member of the model class at or after the start index is consistent.
class ClassExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Planner search would exceed its node budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::uint64_t required, std::uint64_t budget, bool lower_bound);

  /// Node expansions the search needs (a lower bound when `lower_bound()`).
  std::uint64_t required() const { return required_; }
  std::uint64_t budget() const { return budget_; }
  bool lower_bound() const { return lower_bound_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
  bool lower_bound_;
};

/// A policy oracle failed to answer (protocol error, timeout, crash).
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A policy oracle answered the same history differently on replay.
class NondeterminismError : public OracleError {
 public:
  using OracleError::OracleError;
};

/// Failure during a play-out, tagged with the 1-based step it happened at.
class PlayoutError : public std::runtime_error {
 public:
  PlayoutError(std::uint64_t step, std::exception_ptr cause, const std::string& message);

  std::uint64_t step() const { return step_; }
  /// The original exception thrown by the policy or environment.
  std::exception_ptr cause() const { return cause_; }

 private:
  std::uint64_t step_;
  std::exception_ptr cause_;
};

}  // namespace aolab
