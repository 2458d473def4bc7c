#include "robin/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "robin/error.hpp"

namespace robin {

enum class Op { constant, variable, add, sub, mul, div, pow, neg, abs, sign, sqrt, exp, log, sin, cos };

struct Expr::Node {
  Op op = Op::constant;
  double value = 0.0;  // constant value, or the exponent for pow
  int slot = -1;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_const(double c) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::constant;
  n->value = c;
  return n;
}

NodePtr make_var(int slot) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::variable;
  n->slot = slot;
  return n;
}

bool is_const(const NodePtr& n, double c) { return n->op == Op::constant && n->value == c; }

NodePtr make_unary(Op op, NodePtr a) {
  if (a->op == Op::constant && op == Op::neg) return make_const(-a->value);
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->a = std::move(a);
  return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  // Light folding keeps derivative trees readable and cheap to evaluate.
  if (a->op == Op::constant && b->op == Op::constant) {
    switch (op) {
      case Op::add: return make_const(a->value + b->value);
      case Op::sub: return make_const(a->value - b->value);
      case Op::mul: return make_const(a->value * b->value);
      default: break;
    }
  }
  if (op == Op::add) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
  }
  if (op == Op::sub) {
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return make_unary(Op::neg, b);
  }
  if (op == Op::mul) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
  }
  if (op == Op::div && is_const(a, 0.0)) return make_const(0.0);
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_pow(NodePtr a, double exponent) {
  if (exponent == 0.0) return make_const(1.0);
  if (exponent == 1.0) return a;
  if (a->op == Op::constant) return make_const(std::pow(a->value, exponent));
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::pow;
  n->a = std::move(a);
  n->value = exponent;
  return n;
}

double ipow(double x, int n) {
  double r = 1.0;
  bool neg = n < 0;
  unsigned k = static_cast<unsigned>(neg ? -n : n);
  double base = x;
  while (k) {
    if (k & 1u) r *= base;
    base *= base;
    k >>= 1u;
  }
  return neg ? 1.0 / r : r;
}

double eval(const Expr::Node& n, std::span<const double> vars) {
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::variable: return vars[static_cast<std::size_t>(n.slot)];
    case Op::add: return eval(*n.a, vars) + eval(*n.b, vars);
    case Op::sub: return eval(*n.a, vars) - eval(*n.b, vars);
    case Op::mul: return eval(*n.a, vars) * eval(*n.b, vars);
    case Op::div: return eval(*n.a, vars) / eval(*n.b, vars);
    case Op::pow: {
      const double x = eval(*n.a, vars);
      const double e = n.value;
      if (e == std::floor(e) && std::abs(e) <= 64) return ipow(x, static_cast<int>(e));
      return std::pow(x, e);
    }
    case Op::neg: return -eval(*n.a, vars);
    case Op::abs: return std::abs(eval(*n.a, vars));
    case Op::sign: {
      const double x = eval(*n.a, vars);
      return static_cast<double>((x > 0.0) - (x < 0.0));
    }
    case Op::sqrt: return std::sqrt(eval(*n.a, vars));
    case Op::exp: return std::exp(eval(*n.a, vars));
    case Op::log: return std::log(eval(*n.a, vars));
    case Op::sin: return std::sin(eval(*n.a, vars));
    case Op::cos: return std::cos(eval(*n.a, vars));
  }
  return 0.0;
}

NodePtr diff(const NodePtr& n, int slot) {
  switch (n->op) {
    case Op::constant: return make_const(0.0);
    case Op::variable: return make_const(n->slot == slot ? 1.0 : 0.0);
    case Op::add: return make_binary(Op::add, diff(n->a, slot), diff(n->b, slot));
    case Op::sub: return make_binary(Op::sub, diff(n->a, slot), diff(n->b, slot));
    case Op::mul:
      return make_binary(Op::add, make_binary(Op::mul, diff(n->a, slot), n->b),
                         make_binary(Op::mul, n->a, diff(n->b, slot)));
    case Op::div: {
      // (a'b - ab') / b^2
      auto num = make_binary(Op::sub, make_binary(Op::mul, diff(n->a, slot), n->b),
                             make_binary(Op::mul, n->a, diff(n->b, slot)));
      return make_binary(Op::div, num, make_pow(n->b, 2.0));
    }
    case Op::pow:
      return make_binary(Op::mul, make_binary(Op::mul, make_const(n->value), make_pow(n->a, n->value - 1.0)),
                         diff(n->a, slot));
    case Op::neg: return make_unary(Op::neg, diff(n->a, slot));
    case Op::abs: return make_binary(Op::mul, make_unary(Op::sign, n->a), diff(n->a, slot));
    case Op::sign: return make_const(0.0);
    case Op::sqrt:
      return make_binary(Op::div, diff(n->a, slot), make_binary(Op::mul, make_const(2.0), n));
    case Op::exp: return make_binary(Op::mul, n, diff(n->a, slot));
    case Op::log: return make_binary(Op::div, diff(n->a, slot), n->a);
    case Op::sin: return make_binary(Op::mul, make_unary(Op::cos, n->a), diff(n->a, slot));
    case Op::cos:
      return make_unary(Op::neg, make_binary(Op::mul, make_unary(Op::sin, n->a), diff(n->a, slot)));
  }
  return make_const(0.0);
}

bool depends(const Expr::Node& n, int slot) {
  if (n.op == Op::variable) return slot < 0 || n.slot == slot;
  return (n.a && depends(*n.a, slot)) || (n.b && depends(*n.b, slot));
}

void render(const Expr::Node& n, const std::vector<std::string>& vars, std::ostream& os) {
  auto fn = [&](const char* name) {
    os << name << '(';
    render(*n.a, vars, os);
    os << ')';
  };
  auto bin = [&](const char* sym) {
    os << '(';
    render(*n.a, vars, os);
    os << ' ' << sym << ' ';
    render(*n.b, vars, os);
    os << ')';
  };
  switch (n.op) {
    case Op::constant: {
      std::ostringstream s;
      s.precision(17);
      s << n.value;
      os << (n.value < 0 ? "(" + s.str() + ")" : s.str());
      break;
    }
    case Op::variable: os << vars[static_cast<std::size_t>(n.slot)]; break;
    case Op::add: bin("+"); break;
    case Op::sub: bin("-"); break;
    case Op::mul: bin("*"); break;
    case Op::div: bin("/"); break;
    case Op::pow: {
      os << '(';
      render(*n.a, vars, os);
      std::ostringstream s;
      s.precision(17);
      s << n.value;
      os << ")^" << (n.value < 0 ? "(" + s.str() + ")" : s.str());
      break;
    }
    case Op::neg:
      os << "(-";
      render(*n.a, vars, os);
      os << ')';
      break;
    case Op::abs: fn("abs"); break;
    case Op::sign: fn("sign"); break;
    case Op::sqrt: fn("sqrt"); break;
    case Op::exp: fn("exp"); break;
    case Op::log: fn("log"); break;
    case Op::sin: fn("sin"); break;
    case Op::cos: fn("cos"); break;
  }
}

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

  NodePtr parse() {
    NodePtr e = expression();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression \"" + text_ + "\": " + msg + " at column " + std::to_string(pos_ + 1), 1,
                     static_cast<int>(pos_ + 1));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make_binary(Op::add, lhs, term());
      else if (accept('-')) lhs = make_binary(Op::sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make_binary(Op::mul, lhs, unary());
      else if (accept('/')) lhs = make_binary(Op::div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_unary(Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) {
      const std::size_t at = pos_;
      NodePtr exponent = unary();
      if (exponent->op != Op::constant) {
        pos_ = at;
        fail("exponent must be a constant");
      }
      return make_pow(base, exponent->value);
    }
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (accept('(')) {
      NodePtr e = expression();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      return make_const(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '(') {
        const Op op = function(name, start);
        ++pos_;
        NodePtr arg = expression();
        if (!accept(')')) fail("expected ')' after argument of " + name);
        return make_unary(op, arg);
      }
      if (name == "pi") return make_const(3.14159265358979323846);
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return make_var(static_cast<int>(i));
      pos_ = start;
      std::string allowed;
      for (const auto& v : vars_) allowed += (allowed.empty() ? "" : ", ") + v;
      fail("unknown variable '" + name + "' (allowed: " + allowed + ")");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Op function(const std::string& name, std::size_t start) {
    static const std::pair<const char*, Op> table[] = {{"abs", Op::abs}, {"sign", Op::sign}, {"sqrt", Op::sqrt},
                                                       {"exp", Op::exp}, {"log", Op::log},   {"sin", Op::sin},
                                                       {"cos", Op::cos}};
    for (const auto& [n, op] : table)
      if (name == n) return op;
    throw UnknownFunctionError("expression \"" + text_ + "\": unknown function '" + name + "' at column " +
                                   std::to_string(start + 1),
                               1, static_cast<int>(start + 1));
  }

  const std::string& text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr::Expr() : root_(make_const(0.0)), source_("0") {}

Expr::Expr(std::shared_ptr<const Node> root, std::vector<std::string> variables, std::string source)
    : root_(std::move(root)), variables_(std::move(variables)), source_(std::move(source)) {}

Expr Expr::parse(const std::string& text, const std::vector<std::string>& variables) {
  Parser p(text, variables);
  return Expr(p.parse(), variables, text);
}

Expr Expr::constant(double c) {
  std::ostringstream s;
  s.precision(17);
  s << c;
  return Expr(make_const(c), {}, s.str());
}

double Expr::operator()(std::span<const double> vars) const { return eval(*root_, vars); }

Expr Expr::derivative(int slot) const {
  NodePtr d = diff(root_, slot);
  std::ostringstream os;
  render(*d, variables_, os);
  return Expr(d, variables_, os.str());
}

Expr Expr::derivative(const std::string& variable) const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i] == variable) return derivative(static_cast<int>(i));
  return Expr(make_const(0.0), variables_, "0");
}

bool Expr::is_constant() const { return !depends(*root_, -1); }
bool Expr::depends_on(int slot) const { return depends(*root_, slot); }
std::string Expr::str() const { return source_; }

}  // namespace robin
