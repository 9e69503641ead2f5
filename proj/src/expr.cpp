#include "noether/expr.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>

namespace noether {

Expr::Ptr Expr::number(double v, std::size_t pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Constant;
  e->constant = v;
  e->pos = pos;
  return e;
}

Expr::Ptr Expr::variable(std::string name, std::size_t pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Variable;
  e->name = std::move(name);
  e->pos = pos;
  return e;
}

Expr::Ptr Expr::unary(Ptr a, std::size_t pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Unary;
  e->op = '-';
  e->args = {std::move(a)};
  e->pos = pos;
  return e;
}

Expr::Ptr Expr::binary(char op, Ptr a, Ptr b, std::size_t pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Binary;
  e->op = op;
  e->args = {std::move(a), std::move(b)};
  e->pos = pos;
  return e;
}

Expr::Ptr Expr::call(std::string fn, std::vector<Ptr> args, std::size_t pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Call;
  e->name = std::move(fn);
  e->args = std::move(args);
  e->pos = pos;
  return e;
}

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Constant: return a.constant == b.constant;
    case Expr::Kind::Variable: return a.name == b.name;
    case Expr::Kind::Unary: return equal(*a.args[0], *b.args[0]);
    case Expr::Kind::Binary:
      return a.op == b.op && equal(*a.args[0], *b.args[0]) &&
             equal(*a.args[1], *b.args[1]);
    case Expr::Kind::Call:
      if (a.name != b.name || a.args.size() != b.args.size()) return false;
      for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!equal(*a.args[i], *b.args[i])) return false;
      return true;
  }
  return false;
}

namespace {

const std::map<std::string, int>& function_arity() {
  static const std::map<std::string, int> table = {
      {"sin", 1},  {"cos", 1},  {"tan", 1},   {"sinh", 1}, {"cosh", 1},
      {"exp", 1},  {"log", 1},  {"sqrt", 1},  {"abs", 1},  {"atan2", 2},
      {"pow", 2}};
  return table;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : src_(text) {}

  Expr::Ptr run() {
    Expr::Ptr e = expression();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError(pos_ + 1, "end of input");
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  // Reported offsets are 1-based.
  void expect(char c, const char* what) {
    if (!accept(c)) throw ParseError(pos_ + 1, what);
  }

  Expr::Ptr expression() {
    Expr::Ptr e = term();
    for (;;) {
      std::size_t at = pos_;
      if (accept('+')) {
        e = Expr::binary('+', e, term(), at);
      } else if (accept('-')) {
        e = Expr::binary('-', e, term(), at);
      } else {
        return e;
      }
    }
  }

  Expr::Ptr term() {
    Expr::Ptr e = unary();
    for (;;) {
      std::size_t at = pos_;
      if (accept('*')) {
        e = Expr::binary('*', e, unary(), at);
      } else if (accept('/')) {
        e = Expr::binary('/', e, unary(), at);
      } else {
        return e;
      }
    }
  }

  // Unary minus binds looser than '^': -2^2 parses as -(2^2).
  Expr::Ptr unary() {
    std::size_t at = pos_;
    if (accept('-')) return Expr::unary(unary(), at);
    return power();
  }

  Expr::Ptr power() {
    Expr::Ptr base = primary();
    std::size_t at = pos_;
    if (accept('^')) return Expr::binary('^', base, unary(), at);
    return base;
  }

  Expr::Ptr primary() {
    char c = peek();
    std::size_t at = pos_;
    if (c == '(') {
      ++pos_;
      Expr::Ptr e = expression();
      expect(')', "')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(at);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier(at);
    throw ParseError(pos_ + 1, "a number, name, or '('");
  }

  Expr::Ptr number(std::size_t at) {
    std::size_t end = at;
    bool digits = false;
    while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) {
      ++end;
      digits = true;
    }
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) {
        ++end;
        digits = true;
      }
    }
    if (!digits) throw ParseError(at + 1, "a digit");
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t mark = end + 1;
      if (mark < src_.size() && (src_[mark] == '+' || src_[mark] == '-')) ++mark;
      if (mark < src_.size() && std::isdigit(static_cast<unsigned char>(src_[mark]))) {
        ++mark;
        while (mark < src_.size() && std::isdigit(static_cast<unsigned char>(src_[mark])))
          ++mark;
        end = mark;
      }
    }
    double v = 0.0;
    auto res = std::from_chars(src_.data() + at, src_.data() + end, v);
    if (res.ec != std::errc{}) throw ParseError(at + 1, "a valid numeric literal");
    pos_ = end;
    return Expr::number(v, at);
  }

  Expr::Ptr identifier(std::size_t at) {
    std::size_t end = at;
    while (end < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
      ++end;
    std::string name(src_.substr(at, end - at));
    pos_ = end;
    if (peek() != '(') return Expr::variable(std::move(name), at);

    auto arity = function_arity().find(name);
    if (arity == function_arity().end())
      throw ParseError(at + 1, "a known function name (got '" + name + "')");
    ++pos_;  // consume '('
    std::vector<Expr::Ptr> args;
    if (peek() != ')') {
      args.push_back(expression());
      while (accept(',')) args.push_back(expression());
    }
    expect(')', "')'");
    if (static_cast<int>(args.size()) != arity->second)
      throw ParseError(at + 1, std::to_string(arity->second) + " argument(s) to '" +
                               name + "' (got " + std::to_string(args.size()) + ")");
    return Expr::call(std::move(name), std::move(args), at);
  }
};

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Binary:
      if (e.op == '+' || e.op == '-') return 1;
      if (e.op == '*' || e.op == '/') return 2;
      return 4;  // '^'
    case Expr::Kind::Unary:
      return 3;
    default:
      return 5;
  }
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& child, int parent_prec, bool tight, std::string& out) {
  bool parens = precedence(child) < parent_prec || (tight && precedence(child) == parent_prec);
  if (parens) out += '(';
  print(child, out);
  if (parens) out += ')';
}

void print(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::Constant: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", e.constant);
      out += buf;
      return;
    }
    case Expr::Kind::Variable:
      out += e.name;
      return;
    case Expr::Kind::Unary:
      out += '-';
      print_child(*e.args[0], precedence(e), false, out);
      return;
    case Expr::Kind::Binary: {
      int p = precedence(e);
      // '-' and '/' need parens around same-precedence right children;
      // '^' is right-associative so the left child takes them instead.
      bool tight_left = (e.op == '^');
      bool tight_right = (e.op == '-' || e.op == '/');
      print_child(*e.args[0], p, tight_left, out);
      out += e.op;
      print_child(*e.args[1], p, tight_right, out);
      return;
    }
    case Expr::Kind::Call: {
      out += e.name;
      out += '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        print(*e.args[i], out);
      }
      out += ')';
      return;
    }
  }
}

void collect_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::Variable) out.insert(e.name);
  for (const auto& a : e.args) collect_vars(*a, out);
}

}  // namespace

Expr::Ptr parse_expression(std::string_view text) { return Parser(text).run(); }

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  collect_vars(e, out);
  return out;
}

namespace detail {

DomainError annotate(const DomainError& err, const Expr& node) {
  std::string msg = err.what();
  if (msg.find(" in '") != std::string::npos) return err;  // already annotated
  msg += " in '" + to_string(node) + "'";
  if (node.pos != Expr::npos)
    msg += " (offset " + std::to_string(node.pos + 1) + ")";
  return DomainError(msg);
}

}  // namespace detail

CompiledExpr::CompiledExpr(Expr::Ptr e, const std::vector<std::string>& frame_names,
                           const std::map<std::string, double>& params)
    : root_(std::move(e)) {
  for (const std::string& v : free_variables(*root_)) {
    bool found = false;
    for (std::size_t i = 0; i < frame_names.size(); ++i) {
      if (frame_names[i] == v) {
        slots_[v] = static_cast<int>(i);
        found = true;
        break;
      }
    }
    if (found) continue;
    auto p = params.find(v);
    if (p == params.end())
      throw UsageError("variable '" + v + "' is neither a coordinate of the frame nor a parameter");
    slots_[v] = -1;
    params_[v] = p->second;
  }
}

}  // namespace noether
