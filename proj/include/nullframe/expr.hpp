#pragma once

// Curve component expressions.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | atom ('^' integer)*
//   atom   := number | param | func '(' expr ')' | '(' expr ')'
//   func   := sqrt | sin | cos | exp | log
//
// '^' takes only nonnegative integer literals, binds tighter than unary
// minus and associates to the right. Domain checks (division, sqrt, log)
// happen at evaluation time.

#include <nullframe/errors.hpp>
#include <nullframe/jet.hpp>

#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <type_traits>

namespace nullframe {

class Expr {
 public:
  enum class Kind { number, parameter, add, sub, mul, div, neg, pow, sqrt, sin, cos, exp, log };

  struct Node {
    Kind kind;
    double value = 0.0;  // number literal
    int exponent = 0;    // pow
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> root, std::string parameter = "s")
      : root_(std::move(root)), parameter_(std::move(parameter)) {}

  static Expr number(double value);
  static Expr parameter(std::string name = "s");

  bool empty() const { return root_ == nullptr; }
  const Node& root() const { return *root_; }
  const std::string& parameter_name() const { return parameter_; }

  /// Fully parenthesized rendering; round-trips through parse.
  std::string to_string() const;

  /// Point value in any floating type.
  template <typename Scalar>
  Scalar evaluate(Scalar t) const {
    return eval<Scalar>(*root_, t);
  }

  /// Truncated Taylor series of order `order` about `base`.
  template <typename Scalar>
  Jet<Scalar> jet(Scalar base, int order) const {
    if (order < 0) throw InputError("jet order must be nonnegative");
    return eval<Jet<Scalar>>(*root_, Jet<Scalar>::variable(base, order));
  }

 private:
  template <typename T>
  T eval(const Node& node, const T& t) const;

  std::shared_ptr<const Node> root_;
  std::string parameter_ = "s";
};

/// Parse `text` with `parameter` as the only free symbol. Throws SyntaxError.
Expr parse(std::string_view text, const std::string& parameter = "s");

/// Render a subtree; used in evaluation error messages.
std::string render(const Expr::Node& node, const std::string& parameter);

namespace detail {

template <typename T>
struct Algebra {
  static double constant_term(const T& x) { return static_cast<double>(x[0]); }
  static int order(const T& x) { return x.order(); }
  static T constant(double v, const T& like) {
    return T(like.order(), static_cast<typename std::decay_t<decltype(like[0])>>(v));
  }
};

template <typename T>
  requires std::is_floating_point_v<T>
struct Algebra<T> {
  static double constant_term(const T& x) { return static_cast<double>(x); }
  static int order(const T&) { return 0; }
  static T constant(double v, const T&) { return static_cast<T>(v); }
};

template <typename T>
T int_power(const T& x, int n) {
  if constexpr (std::is_floating_point_v<T>) {
    T r(1), b = x;
    while (n > 0) {
      if (n & 1) r *= b;
      n >>= 1;
      if (n > 0) b *= b;
    }
    return r;
  } else {
    return pow(x, n);
  }
}

}  // namespace detail

template <typename T>
T Expr::eval(const Node& node, const T& t) const {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  using A = detail::Algebra<T>;
  auto fail = [&](const char* what) -> EvaluationError {
    return EvaluationError(std::string(what) + " in subexpression " + render(node, parameter_));
  };
  switch (node.kind) {
    case Kind::number:
      return A::constant(node.value, t);
    case Kind::parameter:
      return t;
    case Kind::add:
      return eval(*node.lhs, t) + eval(*node.rhs, t);
    case Kind::sub:
      return eval(*node.lhs, t) - eval(*node.rhs, t);
    case Kind::mul:
      return eval(*node.lhs, t) * eval(*node.rhs, t);
    case Kind::div: {
      const T d = eval(*node.rhs, t);
      if (A::constant_term(d) == 0.0) throw fail("division by zero");
      return eval(*node.lhs, t) / d;
    }
    case Kind::neg:
      return -eval(*node.lhs, t);
    case Kind::pow:
      return detail::int_power(eval(*node.lhs, t), node.exponent);
    case Kind::sqrt: {
      const T a = eval(*node.lhs, t);
      const double a0 = A::constant_term(a);
      if (a0 < 0.0 || (a0 == 0.0 && A::order(a) > 0)) throw fail("sqrt of a nonpositive value");
      return sqrt(a);
    }
    case Kind::sin:
      return sin(eval(*node.lhs, t));
    case Kind::cos:
      return cos(eval(*node.lhs, t));
    case Kind::exp:
      return exp(eval(*node.lhs, t));
    case Kind::log: {
      const T a = eval(*node.lhs, t);
      if (!(A::constant_term(a) > 0.0)) throw fail("log of a nonpositive value");
      return log(a);
    }
  }
  throw fail("unknown node");
}

}  // namespace nullframe
