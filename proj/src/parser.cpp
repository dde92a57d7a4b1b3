#include "stosym/parser.hpp"

#include <cctype>

namespace stosym {

namespace {

class Parser {
 public:
  Parser(const std::string& text, const Context& ctx) : text_(text), ctx_(ctx) {}

  Expr run() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected character");
    return e;
  }

 private:
  const std::string& text_;
  const Context& ctx_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, pos_ + 1);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Expr parse_sum() {
    Expr first = parse_term();
    std::vector<Expr> terms{first};
    while (true) {
      if (eat('+')) {
        terms.push_back(parse_term());
      } else if (eat('-')) {
        terms.push_back(Expr::mul({Expr::number(-1), parse_term()}));
      } else {
        break;
      }
    }
    return Expr::add(std::move(terms));
  }

  Expr parse_term() {
    Expr e = parse_unary();
    while (true) {
      if (eat('*')) {
        e = Expr::mul({e, parse_unary()});
      } else if (eat('/')) {
        e = Expr::div(e, parse_unary());
      } else {
        break;
      }
    }
    return e;
  }

  Expr parse_unary() {
    if (eat('-')) return Expr::mul({Expr::number(-1), parse_unary()});
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (eat('^')) {
      Rational k = parse_exponent();
      return Expr::pow(std::move(base), std::move(k));
    }
    return base;
  }

  // Exponents are restricted to literals: 2, -2, (1/2), (-3/2). A slash is
  // part of the exponent only inside parentheses; x^2/2 is (x^2)/2.
  Rational parse_exponent() {
    skip_ws();
    bool parens = eat('(');
    bool neg = eat('-');
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected integer or rational exponent");
    Rational value = parse_number_literal();
    if (parens && eat('/')) {
      skip_ws();
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        fail("expected denominator");
      Rational den = parse_number_literal();
      if (den == 0) fail("zero denominator in exponent");
      value /= den;
    }
    if (neg) value = -value;
    if (parens && !eat(')')) fail("expected ')'");
    return value;
  }

  Rational parse_number_literal() {
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string digits = text_.substr(start, pos_ - start);
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      size_t frac_start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string frac = text_.substr(frac_start, pos_ - frac_start);
      if (frac.empty()) fail("expected digits after decimal point");
      BigInt scale = 1;
      for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
      BigInt whole(digits.empty() ? "0" : digits);
      BigInt fractional(frac);
      return Rational(whole * scale + fractional, scale);
    }
    return Rational(BigInt(digits));
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Rational v = parse_number_literal();
      return Expr::number(std::move(v));
    }
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name = text_.substr(start, pos_ - start);
      if (peek() == '(') {
        eat('(');
        std::vector<Expr> args;
        args.push_back(parse_sum());
        while (eat(',')) args.push_back(parse_sum());
        if (!eat(')')) fail("expected ')'");
        if (!is_elementary_function(name) && ctx_.atom(name) == nullptr) {
          pos_ = start;
          fail("unknown function '" + name + "'");
        }
        if (const AtomDecl* a = ctx_.atom(name)) {
          if (args.size() != a->formals.size()) {
            pos_ = start;
            fail("wrong argument count for '" + name + "'");
          }
        } else if (args.size() != 1) {
          pos_ = start;
          fail("'" + name + "' takes one argument");
        }
        return Expr::call(std::move(name), std::move(args));
      }
      if (!ctx_.declared(name) || ctx_.role(name) == SymbolRole::AtomName) {
        pos_ = start;
        fail("undeclared identifier '" + name + "'");
      }
      return Expr::symbol(std::move(name));
    }
    fail("unexpected character");
  }
};

}  // namespace

Expr parse(const std::string& text, const Context& ctx) {
  return Parser(text, ctx).run();
}

}  // namespace stosym
