#include <nullframe/expr.hpp>

#include <cctype>
#include <cstdio>
#include <string>

namespace nullframe {

namespace {

using Node = Expr::Node;
using Kind = Expr::Kind;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, const std::string& parameter) : text_(text), parameter_(parameter) {}

  NodePtr parse() {
    NodePtr e = expression();
    skip_space();
    if (pos_ < text_.size()) {
      if (text_[pos_] == ')') throw SyntaxError("unbalanced ')'", pos_);
      throw SyntaxError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      const char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      lhs = make(c == '+' ? Kind::add : Kind::sub, lhs, term());
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      const char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      lhs = make(c == '*' ? Kind::mul : Kind::div, lhs, factor());
    }
  }

  NodePtr factor() {
    if (peek() == '-') {
      ++pos_;
      return make(Kind::neg, factor());
    }
    NodePtr base = atom();
    if (peek() != '^') return base;
    // Collect the exponent chain and fold from the right: a^b^c = a^(b^c).
    std::vector<long long> exponents;
    while (peek() == '^') {
      ++pos_;
      exponents.push_back(integer_literal());
    }
    long long e = exponents.back();
    for (auto it = exponents.rbegin() + 1; it != exponents.rend(); ++it) {
      long long p = 1;
      for (long long i = 0; i < e; ++i) {
        p *= *it;
        if (p > 1'000'000) throw SyntaxError("power exponent too large", pos_);
      }
      e = p;
    }
    if (e > 1'000'000) throw SyntaxError("power exponent too large", pos_);
    auto n = std::make_shared<Node>();
    n->kind = Kind::pow;
    n->lhs = base;
    n->exponent = static_cast<int>(e);
    return n;
  }

  long long integer_literal() {
    skip_space();
    const std::size_t start = pos_;
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      throw SyntaxError("power exponent must be a nonnegative integer literal", start);
    }
    long long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > 1'000'000) throw SyntaxError("power exponent too large", start);
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
      throw SyntaxError("power exponent must be a nonnegative integer literal", start);
    }
    return v;
  }

  NodePtr atom() {
    const char c = peek();
    const std::size_t start = pos_;
    if (c == '(') {
      ++pos_;
      NodePtr inner = expression();
      if (peek() != ')') throw SyntaxError("expected ')' to close '(' opened", start);
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        name += text_[pos_++];
      }
      if (name == parameter_) return make(Kind::parameter);
      Kind kind;
      if (name == "sqrt") kind = Kind::sqrt;
      else if (name == "sin") kind = Kind::sin;
      else if (name == "cos") kind = Kind::cos;
      else if (name == "exp") kind = Kind::exp;
      else if (name == "log") kind = Kind::log;
      else throw SyntaxError("unknown identifier '" + name + "'", start);
      const std::size_t open = pos_;
      if (peek() != '(') throw SyntaxError("expected '(' after " + name, open);
      ++pos_;
      NodePtr arg = expression();
      if (peek() != ')') throw SyntaxError("expected ')' to close " + name + "(", pos_);
      ++pos_;
      return make(kind, arg);
    }
    if (c == '\0') throw SyntaxError("unexpected end of expression", pos_);
    if (c == ')') throw SyntaxError("unbalanced ')'", pos_);
    throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t count = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++count;
      }
      return count;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw SyntaxError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw SyntaxError("malformed number", start);
    }
    if (pos_ < text_.size() && (text_[pos_] == '.' || std::isalpha(static_cast<unsigned char>(text_[pos_])))) {
      throw SyntaxError("malformed number", start);
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::number;
    n->value = std::stod(std::string(text_.substr(start, pos_ - start)));
    return n;
  }

  std::string_view text_;
  const std::string& parameter_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Expr Expr::number(double value) {
  if (value < 0) return Expr(make(Kind::neg, number(-value).root_));
  auto n = std::make_shared<Node>();
  n->kind = Kind::number;
  n->value = value;
  return Expr(n);
}

Expr Expr::parameter(std::string name) { return Expr(make(Kind::parameter), std::move(name)); }

Expr parse(std::string_view text, const std::string& parameter) {
  if (parameter.empty()) throw InputError("parameter symbol must be nonempty");
  return Expr(Parser(text, parameter).parse(), parameter);
}

std::string render(const Expr::Node& node, const std::string& parameter) {
  auto sub = [&](const NodePtr& p) { return render(*p, parameter); };
  auto binary = [&](const char* op) { return "(" + sub(node.lhs) + " " + op + " " + sub(node.rhs) + ")"; };
  auto call = [&](const char* f) { return std::string(f) + "(" + sub(node.lhs) + ")"; };
  switch (node.kind) {
    case Kind::number:
      return format_number(node.value);
    case Kind::parameter:
      return parameter;
    case Kind::add:
      return binary("+");
    case Kind::sub:
      return binary("-");
    case Kind::mul:
      return binary("*");
    case Kind::div:
      return binary("/");
    case Kind::neg:
      return "(-" + sub(node.lhs) + ")";
    case Kind::pow:
      return "(" + sub(node.lhs) + ")^" + std::to_string(node.exponent);
    case Kind::sqrt:
      return call("sqrt");
    case Kind::sin:
      return call("sin");
    case Kind::cos:
      return call("cos");
    case Kind::exp:
      return call("exp");
    case Kind::log:
      return call("log");
  }
  return "?";
}

std::string Expr::to_string() const { return root_ ? render(*root_, parameter_) : std::string(); }

}  // namespace nullframe
