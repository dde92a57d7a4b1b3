#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stosym/context.hpp"
#include "stosym/expr.hpp"

namespace stosym {

/// Generator of the polynomial ring: a plain symbol, an opaque function
/// application (ln, exp, sin, cos or a declared atom) over canonical
/// argument trees, or a radical base^(1/root).
///
/// Generators are treated as algebraically independent, so zero testing is
/// incomplete for aliased atoms (ln(x^2) vs 2*ln(x) are distinct once past
/// the literal-power rewrite); numeric sampling is the fallback.
struct RatFunc;

struct Gen {
  enum class Tag { Symbol, Call, Radical };
  Tag tag = Tag::Symbol;
  std::string name;        // Symbol, Call
  std::vector<Expr> args;  // Call: canonical argument trees
  Expr base;               // Radical: canonical base tree
  int root = 0;            // Radical: >= 2
  // Radical base in canonical form, used when folding powers; identity of
  // the generator is carried by `base`/`root` alone.
  std::shared_ptr<const RatFunc> base_rf;

  static Gen sym(std::string n);
  static Gen call(std::string n, std::vector<Expr> canonical_args);
  static Gen radical(Expr canonical_base, int root);

  static int compare(const Gen& a, const Gen& b);
};

/// Product of generator powers; exponents are nonzero integers and may be
/// negative. Radical generators keep exponents in [1, root).
struct Monomial {
  std::vector<std::pair<Gen, int>> factors;  // sorted by Gen order

  static int compare(const Monomial& a, const Monomial& b);
  bool is_unit() const { return factors.empty(); }
  long total_degree() const;
};

/// Sparse multivariate polynomial with exact rational coefficients.
struct Poly {
  std::vector<std::pair<Monomial, Rational>> terms;  // sorted, coeffs nonzero

  bool is_zero() const { return terms.empty(); }
  bool is_constant() const;
  Rational constant_value() const;  // requires is_constant()
  static int compare(const Poly& a, const Poly& b);
};

Poly poly_zero();
Poly poly_const(const Rational& c);
Poly poly_gen(const Gen& g, int exponent = 1);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_neg(const Poly& a);
Poly poly_scale(const Poly& a, const Rational& c);
bool poly_equal(const Poly& a, const Poly& b);

/// Quotient of polynomials. Invariants after normal():
///   den is nonzero and not a single term (single-term denominators fold
///   into the numerator via negative exponents), den's leading coefficient
///   is 1, and num/den share no monomial content.
struct RatFunc {
  Poly num;
  Poly den;  // defaults to 1

  RatFunc() : num(poly_zero()), den(poly_const(1)) {}
  RatFunc(Poly n, Poly d) : num(std::move(n)), den(std::move(d)) {}

  bool is_zero() const { return num.is_zero(); }
  bool is_constant() const { return num.is_constant() && den.is_constant(); }
  Rational constant_value() const;
  static int compare(const RatFunc& a, const RatFunc& b);
};

RatFunc rf_const(const Rational& c);
RatFunc rf_gen(const Gen& g, int exponent = 1);
/// coeff * monomial (any integer exponents; radical powers are folded).
RatFunc rf_term(const Monomial& m, const Rational& coeff);
RatFunc rf_add(const RatFunc& a, const RatFunc& b);
RatFunc rf_sub(const RatFunc& a, const RatFunc& b);
RatFunc rf_neg(const RatFunc& a);
RatFunc rf_mul(const RatFunc& a, const RatFunc& b);
RatFunc rf_div(const RatFunc& a, const RatFunc& b);  // throws on zero divisor
RatFunc rf_pow(const RatFunc& a, long k);
bool rf_equal(const RatFunc& a, const RatFunc& b);

/// Exact polynomial quotient a/b, or nullopt when b does not divide a.
std::optional<Poly> poly_exact_div(const Poly& a, const Poly& b);

/// Substitutes a rational constant for a plain symbol generator; returns
/// nullopt when the symbol occurs with a negative exponent and value == 0,
/// or inside an atom argument or radical base.
std::optional<Poly> poly_subst_const(const Poly& p, const std::string& symbol,
                                     const Rational& value);

/// Lowers an expression tree to the canonical quotient. Applies the
/// constant-folding rewrites (ln 1, exp 0, sin 0, cos 1, perfect-power
/// radicals, ln of a literal integer power). Throws on division by an
/// identically-zero denominator and on undeclared identifiers.
RatFunc canon(const Expr& e, const Context& ctx);

/// Canonical tree for a quotient; round-trips through canon().
Expr uncanon(const RatFunc& f);
Expr uncanon_poly(const Poly& p);

/// uncanon(canon(e)): the canonical form of the expression.
Expr normalize(const Expr& e, const Context& ctx);

/// True when the expression is exactly zero in the polynomial model.
bool symbolic_zero(const Expr& e, const Context& ctx);

/// Plain symbols occurring anywhere in the canonical form, atom arguments
/// and radical bases included.
std::vector<std::string> rf_symbols(const RatFunc& f);

/// Parameter symbols p for which small rational roots (p - c) divide the
/// numerator; each divides at most to its multiplicity. Used to surface
/// special-case conditions like a residual vanishing only when A = 1.
std::vector<Expr> special_factors(const RatFunc& residual, const Context& ctx);

}  // namespace stosym
