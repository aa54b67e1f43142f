#include "fracinv/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fracinv/error.hpp"

namespace fracinv {

enum class NodeKind { kConstant, kVariable, kPi, kNegate, kAdd, kSubtract, kMultiply, kDivide, kPower, kCall };

enum class Builtin { kSin, kCos, kExp, kSqrt, kAbs, kLog };

struct Expression::Node {
  NodeKind kind = NodeKind::kConstant;
  double value = 0.0;
  Builtin function = Builtin::kSin;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

constexpr std::array<std::pair<std::string_view, Builtin>, 6> kBuiltins{{
    {"sin", Builtin::kSin},
    {"cos", Builtin::kCos},
    {"exp", Builtin::kExp},
    {"sqrt", Builtin::kSqrt},
    {"abs", Builtin::kAbs},
    {"log", Builtin::kLog},
}};

std::string_view builtin_name(Builtin f) {
  for (const auto& [name, id] : kBuiltins) {
    if (id == f) return name;
  }
  return "?";
}

NodePtr make_leaf(NodeKind kind, double value = 0.0) {
  auto node = std::make_shared<Expression::Node>();
  node->kind = kind;
  node->value = value;
  return node;
}

NodePtr make_unary(NodeKind kind, NodePtr child, Builtin f = Builtin::kSin) {
  auto node = std::make_shared<Expression::Node>();
  node->kind = kind;
  node->function = f;
  node->lhs = std::move(child);
  return node;
}

NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
  auto node = std::make_shared<Expression::Node>();
  node->kind = kind;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return node;
}

class Parser {
 public:
  Parser(std::string_view source, std::string_view variable)
      : source_(source), variable_(variable) {}

  NodePtr parse() {
    skip_space();
    if (pos_ == source_.size()) throw ParseError("empty expression", pos_);
    NodePtr root = parse_sum();
    skip_space();
    if (pos_ != source_.size()) {
      throw ParseError(std::string("unexpected '") + source_[pos_] + "'", pos_);
    }
    return root;
  }

 private:
  void skip_space() {
    while (pos_ < source_.size() && std::isspace(static_cast<unsigned char>(source_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < source_.size() && source_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(NodeKind::kAdd, lhs, parse_product());
      } else if (accept('-')) {
        lhs = make_binary(NodeKind::kSubtract, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(NodeKind::kMultiply, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_binary(NodeKind::kDivide, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_unary(NodeKind::kNegate, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  // Right associative; the exponent may carry its own unary sign (x^-1).
  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return make_binary(NodeKind::kPower, base, parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ == source_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = source_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < source_.size() &&
           (std::isdigit(static_cast<unsigned char>(source_[pos_])) || source_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < source_.size() && (source_[pos_] == 'e' || source_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < source_.size() && (source_[look] == '+' || source_[look] == '-')) ++look;
      if (look < source_.size() && std::isdigit(static_cast<unsigned char>(source_[look]))) {
        pos_ = look;
        while (pos_ < source_.size() && std::isdigit(static_cast<unsigned char>(source_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto [end, ec] = std::from_chars(source_.data() + start, source_.data() + pos_, value);
    if (ec != std::errc() || end != source_.data() + pos_) {
      throw ParseError("malformed number '" + std::string(source_.substr(start, pos_ - start)) + "'",
                       start);
    }
    return make_leaf(NodeKind::kConstant, value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < source_.size() &&
           (std::isalnum(static_cast<unsigned char>(source_[pos_])) || source_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = source_.substr(start, pos_ - start);
    skip_space();
    if (pos_ < source_.size() && source_[pos_] == '(') {
      for (const auto& [fname, id] : kBuiltins) {
        if (fname == name) {
          ++pos_;
          NodePtr arg = parse_sum();
          if (!accept(')')) throw ParseError("expected ')' after argument of " + std::string(name), pos_);
          return make_unary(NodeKind::kCall, arg, id);
        }
      }
      throw UnknownIdentifierError(std::string(name), start);
    }
    if (name == variable_) return make_leaf(NodeKind::kVariable);
    if (name == "pi") return make_leaf(NodeKind::kPi);
    throw UnknownIdentifierError(std::string(name), start);
  }

  std::string_view source_;
  std::string_view variable_;
  std::size_t pos_ = 0;
};

double checked(double result, const char* what) {
  if (!std::isfinite(result)) throw DomainError(std::string("non-finite result in ") + what);
  return result;
}

double evaluate(const Expression::Node& node, double x) {
  switch (node.kind) {
    case NodeKind::kConstant:
      return node.value;
    case NodeKind::kVariable:
      return x;
    case NodeKind::kPi:
      return std::numbers::pi;
    case NodeKind::kNegate:
      return -evaluate(*node.lhs, x);
    case NodeKind::kAdd:
      return checked(evaluate(*node.lhs, x) + evaluate(*node.rhs, x), "addition");
    case NodeKind::kSubtract:
      return checked(evaluate(*node.lhs, x) - evaluate(*node.rhs, x), "subtraction");
    case NodeKind::kMultiply:
      return checked(evaluate(*node.lhs, x) * evaluate(*node.rhs, x), "multiplication");
    case NodeKind::kDivide: {
      const double den = evaluate(*node.rhs, x);
      if (den == 0.0) throw DomainError("division by zero");
      return checked(evaluate(*node.lhs, x) / den, "division");
    }
    case NodeKind::kPower: {
      const double base = evaluate(*node.lhs, x);
      const double exponent = evaluate(*node.rhs, x);
      if (base == 0.0 && exponent < 0.0) throw DomainError("0 raised to a negative power");
      if (base < 0.0 && exponent != std::floor(exponent)) {
        throw DomainError("negative base raised to a non-integer power");
      }
      return checked(std::pow(base, exponent), "power");
    }
    case NodeKind::kCall: {
      const double a = evaluate(*node.lhs, x);
      switch (node.function) {
        case Builtin::kSin:
          return std::sin(a);
        case Builtin::kCos:
          return std::cos(a);
        case Builtin::kExp:
          return checked(std::exp(a), "exp");
        case Builtin::kSqrt:
          if (a < 0.0) throw DomainError("sqrt of a negative number");
          return std::sqrt(a);
        case Builtin::kAbs:
          return std::abs(a);
        case Builtin::kLog:
          if (a <= 0.0) throw DomainError("log of a nonpositive number");
          return std::log(a);
      }
    }
  }
  return 0.0;
}

std::string format_constant(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print(const Expression::Node& node, const std::string& var, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print(*node.lhs, var, out);
    out += op;
    print(*node.rhs, var, out);
    out += ')';
  };
  switch (node.kind) {
    case NodeKind::kConstant:
      out += format_constant(node.value);
      break;
    case NodeKind::kVariable:
      out += var;
      break;
    case NodeKind::kPi:
      out += "pi";
      break;
    case NodeKind::kNegate:
      out += "(-";
      print(*node.lhs, var, out);
      out += ')';
      break;
    case NodeKind::kAdd:
      binary(" + ");
      break;
    case NodeKind::kSubtract:
      binary(" - ");
      break;
    case NodeKind::kMultiply:
      binary(" * ");
      break;
    case NodeKind::kDivide:
      binary(" / ");
      break;
    case NodeKind::kPower:
      binary("^");
      break;
    case NodeKind::kCall:
      out += builtin_name(node.function);
      out += '(';
      print(*node.lhs, var, out);
      out += ')';
      break;
  }
}

}  // namespace

Expression::Expression(std::shared_ptr<const Node> root, std::string variable)
    : root_(std::move(root)), variable_(std::move(variable)) {}

double Expression::operator()(double value) const { return evaluate(*root_, value); }

std::string Expression::to_string() const {
  std::string out;
  print(*root_, variable_, out);
  return out;
}

Expression parse_expr(std::string_view source, std::string_view variable) {
  if (variable.empty()) throw ConfigError("expression variable name must be non-empty");
  Parser parser(source, variable);
  return Expression(parser.parse(), std::string(variable));
}

TabulatedFunction::TabulatedFunction(std::vector<double> abscissae, std::vector<double> values)
    : abscissae_(std::move(abscissae)), values_(std::move(values)) {
  if (abscissae_.size() != values_.size()) throw ConfigError("table: column lengths differ");
  if (abscissae_.size() < 2) throw ConfigError("table: at least two rows are required");
  for (std::size_t i = 1; i < abscissae_.size(); ++i) {
    if (!(abscissae_[i] > abscissae_[i - 1])) {
      throw ConfigError("table: abscissae must be strictly increasing (row " + std::to_string(i + 1) +
                        ")");
    }
  }
}

TabulatedFunction TabulatedFunction::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table file " + path.string());
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> xs;
  std::vector<double> ys;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ConfigError(path.string() + ": row " + std::to_string(row) + " has no comma");
    }
    try {
      xs.push_back(std::stod(line.substr(0, comma)));
      ys.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ConfigError(path.string() + ": row " + std::to_string(row) + " is not numeric");
    }
  }
  TabulatedFunction table(std::move(xs), std::move(ys));
  table.source_ = path.string();
  return table;
}

double TabulatedFunction::operator()(double x) const {
  const double lo = abscissae_.front();
  const double hi = abscissae_.back();
  // Allow rounding-level overshoot at the ends of a table written on the same grid.
  const double slack = 1e-12 * std::max(1.0, std::abs(hi - lo));
  if (x < lo - slack || x > hi + slack) {
    throw DomainError("table: " + format_constant(x) + " outside [" + format_constant(lo) + ", " +
                      format_constant(hi) + "]");
  }
  if (x <= lo) return values_.front();
  if (x >= hi) return values_.back();
  const auto it = std::upper_bound(abscissae_.begin(), abscissae_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - abscissae_.begin()) - 1;
  const double w = (x - abscissae_[i]) / (abscissae_[i + 1] - abscissae_[i]);
  return (1.0 - w) * values_[i] + w * values_[i + 1];
}

double ScalarFunction::operator()(double x) const {
  return std::visit(
      [x](const auto& f) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(f)>, std::monostate>) {
          throw ConfigError("evaluating an unset function");
        } else {
          return f(x);
        }
      },
      impl_);
}

std::string ScalarFunction::describe() const {
  if (const auto* e = std::get_if<Expression>(&impl_)) return e->to_string();
  if (const auto* t = std::get_if<TabulatedFunction>(&impl_)) {
    return "table[" + std::to_string(t->abscissae().size()) + "]";
  }
  return "";
}

}  // namespace fracinv
