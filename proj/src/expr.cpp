#include "stosym/expr.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace stosym {

namespace {

std::shared_ptr<const ExprNode> make_node(NodeKind kind, Rational value,
                                          std::string name, std::vector<Expr> operands) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->value = std::move(value);
  n->name = std::move(name);
  n->operands = std::move(operands);
  return n;
}

const std::shared_ptr<const ExprNode>& zero_node() {
  static const std::shared_ptr<const ExprNode> z =
      make_node(NodeKind::Number, Rational(0), "", {});
  return z;
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr Expr::number(Rational value) {
  return Expr(make_node(NodeKind::Number, std::move(value), "", {}));
}

Expr Expr::number(long value) { return number(Rational(value)); }

Expr Expr::symbol(std::string name) {
  return Expr(make_node(NodeKind::Symbol, Rational(0), std::move(name), {}));
}

Expr Expr::add(std::vector<Expr> terms) {
  if (terms.empty()) return number(0);
  if (terms.size() == 1) return terms.front();
  return Expr(make_node(NodeKind::Add, Rational(0), "", std::move(terms)));
}

Expr Expr::mul(std::vector<Expr> factors) {
  if (factors.empty()) return number(1);
  if (factors.size() == 1) return factors.front();
  return Expr(make_node(NodeKind::Mul, Rational(0), "", std::move(factors)));
}

Expr Expr::div(Expr numerator, Expr denominator) {
  return Expr(make_node(NodeKind::Div, Rational(0), "",
                        {std::move(numerator), std::move(denominator)}));
}

Expr Expr::pow(Expr base, Rational exponent) {
  return Expr(make_node(NodeKind::Pow, std::move(exponent), "", {std::move(base)}));
}

Expr Expr::call(std::string function, std::vector<Expr> args) {
  return Expr(make_node(NodeKind::Call, Rational(0), std::move(function), std::move(args)));
}

NodeKind Expr::kind() const { return node_->kind; }
const Rational& Expr::number_value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const std::vector<Expr>& Expr::operands() const { return node_->operands; }
const Rational& Expr::exponent() const { return node_->value; }

bool Expr::is_zero_literal() const {
  return kind() == NodeKind::Number && number_value() == 0;
}

bool Expr::is_one_literal() const {
  return kind() == NodeKind::Number && number_value() == 1;
}

int Expr::compare(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case NodeKind::Number:
      if (a.number_value() != b.number_value())
        return a.number_value() < b.number_value() ? -1 : 1;
      return 0;
    case NodeKind::Symbol:
      return a.name().compare(b.name());
    case NodeKind::Pow:
      if (a.exponent() != b.exponent()) return a.exponent() < b.exponent() ? -1 : 1;
      break;
    case NodeKind::Call: {
      int c = a.name().compare(b.name());
      if (c != 0) return c;
      break;
    }
    default:
      break;
  }
  const auto& oa = a.operands();
  const auto& ob = b.operands();
  if (oa.size() != ob.size()) return oa.size() < ob.size() ? -1 : 1;
  for (size_t i = 0; i < oa.size(); ++i) {
    int c = compare(oa[i], ob[i]);
    if (c != 0) return c;
  }
  return 0;
}

namespace {

// Precedence levels used when printing: higher binds tighter.
enum { kPrecAdd = 1, kPrecMul = 2, kPrecUnary = 3, kPrecPow = 4, kPrecAtom = 5 };

int print_precedence(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Add:
      return kPrecAdd;
    case NodeKind::Mul:
    case NodeKind::Div:
      return kPrecMul;
    case NodeKind::Pow:
      return kPrecPow;
    case NodeKind::Number:
      if (e.number_value() < 0) return kPrecUnary;
      if (!is_integer(e.number_value())) return kPrecMul;  // prints as p/q
      return kPrecAtom;
    default:
      return kPrecAtom;
  }
}

void print(const Expr& e, std::ostream& os, int parent_prec) {
  int prec = print_precedence(e);
  bool parens = prec < parent_prec;
  if (parens) os << "(";
  switch (e.kind()) {
    case NodeKind::Number:
      os << rat_to_string(e.number_value());
      break;
    case NodeKind::Symbol:
      os << e.name();
      break;
    case NodeKind::Add: {
      bool first = true;
      for (const auto& term : e.operands()) {
        // Fold a leading unary minus of the term into the separator.
        auto positive_part = [](const Expr& t, auto&& self) -> std::optional<Expr> {
          if (t.kind() == NodeKind::Number && t.number_value() < 0)
            return Expr::number(-t.number_value());
          if (t.kind() == NodeKind::Mul && !t.operands().empty() &&
              t.operands().front().kind() == NodeKind::Number &&
              t.operands().front().number_value() < 0) {
            std::vector<Expr> rest = t.operands();
            rest.front() = Expr::number(-rest.front().number_value());
            if (rest.front().is_one_literal()) rest.erase(rest.begin());
            return Expr::mul(std::move(rest));
          }
          if (t.kind() == NodeKind::Div) {
            if (auto n = self(t.operands()[0], self))
              return Expr::div(std::move(*n), t.operands()[1]);
          }
          return std::nullopt;
        };
        std::optional<Expr> stripped = positive_part(term, positive_part);
        bool negative = stripped.has_value();
        const Expr& body = negative ? *stripped : term;
        if (first) {
          if (negative) os << "-";
          first = false;
        } else {
          os << (negative ? " - " : " + ");
        }
        print(body, os, negative ? kPrecMul : kPrecAdd);
      }
      break;
    }
    case NodeKind::Mul: {
      bool first = true;
      for (const auto& f : e.operands()) {
        if (!first) os << "*";
        print(f, os, kPrecMul + (first ? 0 : 1));
        first = false;
      }
      break;
    }
    case NodeKind::Div:
      print(e.operands()[0], os, kPrecMul);
      os << "/";
      print(e.operands()[1], os, kPrecMul + 1);
      break;
    case NodeKind::Pow: {
      print(e.operands()[0], os, kPrecPow + 1);
      os << "^";
      const Rational& k = e.exponent();
      if (is_integer(k) && k >= 0) {
        os << rat_to_string(k);
      } else {
        os << "(" << rat_to_string(k) << ")";
      }
      break;
    }
    case NodeKind::Call: {
      os << e.name() << "(";
      bool first = true;
      for (const auto& a : e.operands()) {
        if (!first) os << ", ";
        print(a, os, kPrecAdd);
        first = false;
      }
      os << ")";
      break;
    }
  }
  if (parens) os << ")";
}

}  // namespace

std::string Expr::str() const {
  std::ostringstream os;
  print(*this, os, 0);
  return os.str();
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) {
  return Expr::add({a, Expr::mul({Expr::number(-1), b})});
}
Expr operator*(const Expr& a, const Expr& b) { return Expr::mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::div(a, b); }
Expr operator-(const Expr& a) { return Expr::mul({Expr::number(-1), a}); }

}  // namespace stosym
