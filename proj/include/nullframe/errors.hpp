#pragma once

#include <stdexcept>
#include <string>

namespace nullframe {

/// Broad failure classes. The CLI maps these onto exit codes 2, 3 and 4.
enum class ErrorCategory { input, hypothesis, numerical };

inline const char* to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::input:
      return "input";
    case ErrorCategory::hypothesis:
      return "hypothesis";
    case ErrorCategory::numerical:
      return "numerical";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// Malformed input: dimension mismatch, bad file, bad argument.
class InputError : public Error {
 public:
  explicit InputError(const std::string& message) : Error(ErrorCategory::input, message) {}
};

/// Expression text that does not match the grammar. `column` is 0-based.
class SyntaxError : public InputError {
 public:
  SyntaxError(const std::string& message, std::size_t column)
      : InputError(message + " at column " + std::to_string(column)), column_(column) {}

  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

/// An expression evaluated outside its domain (zero divisor, sqrt/log of a nonpositive value).
class EvaluationError : public InputError {
 public:
  explicit EvaluationError(const std::string& message) : InputError(message) {}
};

/// The input is well formed but violates a precondition of the geometry
/// (wrong nullity sequence, not pseudo-arc parametrized, theorem hypothesis fails).
class HypothesisError : public Error {
 public:
  explicit HypothesisError(const std::string& message) : Error(ErrorCategory::hypothesis, message) {}
};

/// Derivative system is not linearly independent, or the sequences vary along the curve.
class ClassificationError : public HypothesisError {
 public:
  explicit ClassificationError(const std::string& message) : HypothesisError(message) {}
};

/// Integration defect too large, vanishing normalizer, ambiguous orientation.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& message) : Error(ErrorCategory::numerical, message) {}
};

}  // namespace nullframe
