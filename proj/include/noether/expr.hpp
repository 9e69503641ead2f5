#pragma once

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noether/dual.hpp"
#include "noether/errors.hpp"

namespace noether {

/// Immutable expression tree over named real coordinates.
///
/// Grammar (highest precedence first): `^` (right-associative), unary `-`,
/// `*` `/`, `+` `-`. Functions: sin cos tan sinh cosh exp log sqrt abs
/// (unary), atan2 pow (binary). Numeric literals are decimal with an
/// optional exponent. Unary minus binds looser than `^`, so -2^2 == -4.
class Expr {
 public:
  enum class Kind { Constant, Variable, Unary, Binary, Call };
  using Ptr = std::shared_ptr<const Expr>;

  Kind kind;
  double constant = 0.0;   // Kind::Constant
  std::string name;        // Kind::Variable / Kind::Call
  char op = 0;             // Kind::Unary ('-') / Kind::Binary
  std::vector<Ptr> args;
  std::size_t pos = npos;  // byte offset in the source text, if parsed

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  static Ptr number(double v, std::size_t pos = npos);
  static Ptr variable(std::string name, std::size_t pos = npos);
  static Ptr unary(Ptr a, std::size_t pos = npos);
  static Ptr binary(char op, Ptr a, Ptr b, std::size_t pos = npos);
  static Ptr call(std::string fn, std::vector<Ptr> args, std::size_t pos = npos);
};

bool equal(const Expr& a, const Expr& b);

/// Parse expression source text. Throws ParseError with a byte offset and
/// an expected-token hint.
Expr::Ptr parse_expression(std::string_view text);

/// Render with minimal parentheses; parsing the result reproduces the tree.
std::string to_string(const Expr& e);

std::set<std::string> free_variables(const Expr& e);

/// Expression evaluation is generic over the scalar so that the same tree
/// serves plain values and dual numbers of any nesting depth.
template <class T>
using Bindings = std::map<std::string, T>;

namespace detail {

DomainError annotate(const DomainError& err, const Expr& node);

template <class T>
T apply_call(const Expr& e, std::span<const T> a);

template <class T, class Lookup>
T eval_node(const Expr& e, Lookup&& lookup) {
  switch (e.kind) {
    case Expr::Kind::Constant:
      return T(e.constant);
    case Expr::Kind::Variable:
      return lookup(e.name, e.pos);
    case Expr::Kind::Unary:
      return -eval_node<T>(*e.args[0], lookup);
    case Expr::Kind::Binary: {
      T a = eval_node<T>(*e.args[0], lookup);
      T b = eval_node<T>(*e.args[1], lookup);
      try {
        switch (e.op) {
          case '+': return a + b;
          case '-': return a - b;
          case '*': return a * b;
          case '/':
            if (value(b) == 0.0) throw DomainError("division by zero");
            return a / b;
          default:  return pow(a, b);  // '^'
        }
      } catch (const DomainError& err) {
        throw annotate(err, e);
      }
    }
    case Expr::Kind::Call: {
      std::vector<T> a;
      a.reserve(e.args.size());
      for (const auto& arg : e.args) a.push_back(eval_node<T>(*arg, lookup));
      try {
        return apply_call<T>(e, std::span<const T>(a));
      } catch (const DomainError& err) {
        throw annotate(err, e);
      }
    }
  }
  throw Error("corrupt expression node");
}

template <class T>
T apply_call(const Expr& e, std::span<const T> a) {
  const std::string& f = e.name;
  if (f == "sin") return sin(a[0]);
  if (f == "cos") return cos(a[0]);
  if (f == "tan") return tan(a[0]);
  if (f == "sinh") return sinh(a[0]);
  if (f == "cosh") return cosh(a[0]);
  if (f == "exp") return exp(a[0]);
  if (f == "log") return log(a[0]);
  if (f == "sqrt") return sqrt(a[0]);
  if (f == "abs") return abs(a[0]);
  if (f == "atan2") return atan2(a[0], a[1]);
  if (f == "pow") return pow(a[0], a[1]);
  throw Error("unknown function slipped past the parser: " + f);
}

}  // namespace detail

/// Evaluate under named bindings. Unbound variables are an error.
template <class T>
T eval_expression(const Expr& e, const Bindings<T>& b) {
  return detail::eval_node<T>(e, [&](const std::string& n, std::size_t) -> T {
    auto it = b.find(n);
    if (it == b.end()) throw UsageError("unbound variable '" + n + "'");
    return it->second;
  });
}

/// An expression bound to an ordered coordinate frame: variable names are
/// resolved to slot indices (or to fixed parameter values) once, so repeated
/// evaluation is just a tree walk.
class CompiledExpr {
 public:
  CompiledExpr(Expr::Ptr e, const std::vector<std::string>& frame_names,
               const std::map<std::string, double>& params);

  template <class T>
  T eval(std::span<const T> coords) const {
    return detail::eval_node<T>(*root_, [&](const std::string& n, std::size_t pos) -> T {
      auto it = slots_.find(n);
      if (it == slots_.end())
        throw UsageError("unbound variable '" + n + "' at offset " +
                         std::to_string(pos));
      return it->second >= 0 ? coords[static_cast<std::size_t>(it->second)]
                             : T(params_.at(n));
    });
  }

  const Expr& root() const { return *root_; }

 private:
  Expr::Ptr root_;
  std::map<std::string, int> slots_;  // frame index, or -1 for a parameter
  std::map<std::string, double> params_;
};

}  // namespace noether
