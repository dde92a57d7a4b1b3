#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "stosym/rational.hpp"

namespace stosym {

enum class NodeKind { Number, Symbol, Add, Mul, Div, Pow, Call };

struct ExprNode;

/// Immutable symbolic expression. Copying is a pointer copy; all mutating
/// operations build new trees. Values are safe to share across threads.
class Expr {
 public:
  Expr();  // the number 0

  static Expr number(Rational value);
  static Expr number(long value);
  static Expr symbol(std::string name);
  static Expr add(std::vector<Expr> terms);
  static Expr mul(std::vector<Expr> factors);
  static Expr div(Expr numerator, Expr denominator);
  static Expr pow(Expr base, Rational exponent);
  static Expr call(std::string function, std::vector<Expr> args);

  NodeKind kind() const;
  const Rational& number_value() const;
  const std::string& name() const;   // Symbol and Call
  const std::vector<Expr>& operands() const;
  const Rational& exponent() const;  // Pow

  bool is_number() const { return kind() == NodeKind::Number; }
  bool is_zero_literal() const;
  bool is_one_literal() const;

  /// Total structural order; 0 iff structurally identical.
  static int compare(const Expr& a, const Expr& b);
  bool same_as(const Expr& other) const { return compare(*this, other) == 0; }

  /// Renders in the input grammar; parse(str()) reproduces the tree.
  std::string str() const;

  const ExprNode* node() const { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  NodeKind kind;
  Rational value;            // Number; Pow exponent
  std::string name;          // Symbol, Call
  std::vector<Expr> operands;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

inline bool is_elementary_function(const std::string& name) {
  return name == "ln" || name == "exp" || name == "sqrt" || name == "sin" || name == "cos";
}

}  // namespace stosym
