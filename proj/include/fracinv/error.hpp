#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fracinv {

/// Failure classes; the numeric values are the CLI exit codes.
enum class ErrorCategory : int {
  kConfig = 2,
  kNumerical = 3,
  kHypothesis = 4,
};

std::string_view category_name(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error(ErrorCategory::kConfig, message) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& message)
      : Error(ErrorCategory::kNumerical, message) {}
};

/// A well-posedness hypothesis of the problem (p > 0 and q >= 0, boundary vanishing, h != 0,
/// compatibility of g(0)) does not hold.
class HypothesisError : public Error {
 public:
  explicit HypothesisError(const std::string& message)
      : Error(ErrorCategory::kHypothesis, message) {}
};

/// Expression syntax error; `position` is the 0-based character offset.
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& message, std::size_t position)
      : ConfigError(message + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(const std::string& token, std::size_t position)
      : ParseError("unknown identifier '" + token + "'", position), token_(token) {}

  const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

/// Expression evaluated outside its real domain (log of nonpositive, division by
/// zero, ...).
class DomainError : public NumericalError {
 public:
  explicit DomainError(const std::string& message) : NumericalError(message) {}
};

/// Rethrows `error` with `stage: ` prefixed to its message, keeping the category.
[[noreturn]] void rethrow_with_stage(const Error& error, std::string_view stage);

}  // namespace fracinv
