#include "fracinv/error.hpp"

namespace fracinv {

std::string_view category_name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kConfig:
      return "config";
    case ErrorCategory::kNumerical:
      return "numerical";
    case ErrorCategory::kHypothesis:
      return "hypothesis";
  }
  return "unknown";
}

void rethrow_with_stage(const Error& error, std::string_view stage) {
  const std::string message = std::string(stage) + ": " + error.what();
  switch (error.category()) {
    case ErrorCategory::kConfig:
      throw ConfigError(message);
    case ErrorCategory::kNumerical:
      throw NumericalError(message);
    case ErrorCategory::kHypothesis:
      throw HypothesisError(message);
  }
  throw Error(error.category(), message);
}

}  // namespace fracinv
