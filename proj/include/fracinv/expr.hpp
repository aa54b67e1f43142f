#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fracinv {

/// Immutable AST of a one-variable real expression.
///
/// Grammar (highest precedence first): primary, `^` (right associative),
/// unary `-`/`+`, `*` `/`, `+` `-`. Primaries are numbers, the declared
/// variable, the constant `pi`, parenthesised expressions and calls to
/// sin, cos, exp, sqrt, abs, log. Copies share the tree.
class Expression {
 public:
  struct Node;

  /// Evaluates at `value`; throws DomainError when the result is not a finite real.
  double operator()(double value) const;

  const std::string& variable() const { return variable_; }

  /// Fully parenthesised form that parses back to an equivalent tree.
  std::string to_string() const;

 private:
  friend Expression parse_expr(std::string_view source, std::string_view variable);
  Expression(std::shared_ptr<const Node> root, std::string variable);

  std::shared_ptr<const Node> root_;
  std::string variable_;
};

Expression parse_expr(std::string_view source, std::string_view variable);

inline double eval_expr(const Expression& expression, double value) { return expression(value); }

/// Sorted sample table with piecewise-linear interpolation. Evaluation outside
/// [front, back] is a DomainError.
class TabulatedFunction {
 public:
  TabulatedFunction(std::vector<double> abscissae, std::vector<double> values);

  /// Reads a two-column CSV with one header row.
  static TabulatedFunction from_csv(const std::filesystem::path& path);

  double operator()(double x) const;

  const std::vector<double>& abscissae() const { return abscissae_; }
  const std::vector<double>& values() const { return values_; }
  /// File the table was read from; empty for in-memory tables.
  const std::string& source() const { return source_; }

 private:
  std::vector<double> abscissae_;
  std::vector<double> values_;
  std::string source_;
};

/// A data function given either as an expression or as a table.
class ScalarFunction {
 public:
  ScalarFunction() = default;
  ScalarFunction(Expression expression) : impl_(std::move(expression)) {}
  ScalarFunction(TabulatedFunction table) : impl_(std::move(table)) {}

  double operator()(double x) const;

  bool empty() const { return std::holds_alternative<std::monostate>(impl_); }
  bool is_expression() const { return std::holds_alternative<Expression>(impl_); }
  const Expression* expression() const { return std::get_if<Expression>(&impl_); }
  const TabulatedFunction* table() const { return std::get_if<TabulatedFunction>(&impl_); }

  /// Expression text, or "table[n]" for tables.
  std::string describe() const;

 private:
  std::variant<std::monostate, Expression, TabulatedFunction> impl_;
};

}  // namespace fracinv
