#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace robin {

/// A closed scalar expression language for instance data: decimal constants,
/// named variables, + - * / ^ (constant exponents), unary minus, parentheses,
/// and the functions abs, sign, sqrt, exp, log, sin, cos.
///
/// Variables are bound to slots at parse time: the i-th name in the variable
/// list is read from vars[i] during evaluation.
class Expr {
 public:
  struct Node;

  Expr();  // the constant 0

  /// Throws ParseError (column is 1-based within `text`) or UnknownFunctionError.
  static Expr parse(const std::string& text, const std::vector<std::string>& variables);
  static Expr constant(double c);

  double operator()(std::span<const double> vars) const;
  double operator()(std::initializer_list<double> vars) const {
    return (*this)(std::span<const double>(vars.begin(), vars.size()));
  }

  /// Symbolic derivative with respect to a variable slot.
  Expr derivative(int slot) const;
  /// Symbolic derivative with respect to a named variable.
  Expr derivative(const std::string& variable) const;

  bool is_constant() const;
  bool depends_on(int slot) const;
  const std::vector<std::string>& variables() const { return variables_; }
  /// Source text for parsed expressions; a rendering for derived ones.
  std::string str() const;

 private:
  Expr(std::shared_ptr<const Node> root, std::vector<std::string> variables, std::string source);

  std::shared_ptr<const Node> root_;
  std::vector<std::string> variables_;
  std::string source_;
};

}  // namespace robin
