#include "stosym/canon.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace stosym {

namespace {

// Guards the mutual recursion between term folding and quotient arithmetic;
// only deeply nested radicals could approach it.
struct DepthGuard {
  static thread_local int depth;
  DepthGuard() {
    if (++depth > 64) throw std::runtime_error("expression nesting too deep to normalize");
  }
  ~DepthGuard() { --depth; }
};
thread_local int DepthGuard::depth = 0;

}  // namespace

bool exact_root(const BigInt& value, int q, BigInt& out) {
  if (value < 0) return false;
  if (value == 0 || value == 1) {
    out = value;
    return true;
  }
  BigInt lo = 1, hi = value;
  while (lo <= hi) {
    BigInt mid = (lo + hi) / 2;
    BigInt p = 1;
    for (int i = 0; i < q && p <= value; ++i) p *= mid;
    if (p == value) {
      out = mid;
      return true;
    }
    if (p < value)
      lo = mid + 1;
    else
      hi = mid - 1;
  }
  return false;
}

Rational rat_pow(const Rational& r, long k) {
  if (k == 0) return Rational(1);
  if (r == 0) {
    if (k < 0) throw std::domain_error("zero to a negative power");
    return Rational(0);
  }
  Rational base = k < 0 ? Rational(rat_den(r), rat_num(r)) : r;
  unsigned long e = k < 0 ? -static_cast<unsigned long>(k) : static_cast<unsigned long>(k);
  Rational acc(1);
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Generators

Gen Gen::sym(std::string n) {
  Gen g;
  g.tag = Tag::Symbol;
  g.name = std::move(n);
  return g;
}

Gen Gen::call(std::string n, std::vector<Expr> canonical_args) {
  Gen g;
  g.tag = Tag::Call;
  g.name = std::move(n);
  g.args = std::move(canonical_args);
  return g;
}

Gen Gen::radical(Expr canonical_base, int root) {
  Gen g;
  g.tag = Tag::Radical;
  g.base = std::move(canonical_base);
  g.root = root;
  return g;
}

int Gen::compare(const Gen& a, const Gen& b) {
  if (a.tag != b.tag) return a.tag < b.tag ? -1 : 1;
  switch (a.tag) {
    case Tag::Symbol:
      return a.name.compare(b.name);
    case Tag::Call: {
      int c = a.name.compare(b.name);
      if (c != 0) return c;
      if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
      for (size_t i = 0; i < a.args.size(); ++i) {
        c = Expr::compare(a.args[i], b.args[i]);
        if (c != 0) return c;
      }
      return 0;
    }
    case Tag::Radical:
      if (a.root != b.root) return a.root < b.root ? -1 : 1;
      return Expr::compare(a.base, b.base);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Monomials

long Monomial::total_degree() const {
  long d = 0;
  for (const auto& [g, e] : factors) d += e;
  return d;
}

int Monomial::compare(const Monomial& a, const Monomial& b) {
  long da = a.total_degree(), db = b.total_degree();
  if (da != db) return da < db ? -1 : 1;
  size_t i = 0, j = 0;
  while (i < a.factors.size() && j < b.factors.size()) {
    int c = Gen::compare(a.factors[i].first, b.factors[j].first);
    if (c < 0) return a.factors[i].second > 0 ? 1 : -1;
    if (c > 0) return b.factors[j].second > 0 ? -1 : 1;
    if (a.factors[i].second != b.factors[j].second)
      return a.factors[i].second > b.factors[j].second ? 1 : -1;
    ++i;
    ++j;
  }
  if (i < a.factors.size()) return a.factors[i].second > 0 ? 1 : -1;
  if (j < b.factors.size()) return b.factors[j].second > 0 ? -1 : 1;
  return 0;
}

namespace {

Monomial mono_unit() { return Monomial{}; }

// Merges sorted factor lists, summing exponents; drops zeros.
Monomial mono_merge(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.factors.reserve(a.factors.size() + b.factors.size());
  size_t i = 0, j = 0;
  while (i < a.factors.size() || j < b.factors.size()) {
    if (j == b.factors.size() ||
        (i < a.factors.size() && Gen::compare(a.factors[i].first, b.factors[j].first) < 0)) {
      out.factors.push_back(a.factors[i++]);
    } else if (i == a.factors.size() ||
               Gen::compare(a.factors[i].first, b.factors[j].first) > 0) {
      out.factors.push_back(b.factors[j++]);
    } else {
      int e = a.factors[i].second + b.factors[j].second;
      if (e != 0) out.factors.emplace_back(a.factors[i].first, e);
      ++i;
      ++j;
    }
  }
  return out;
}

Monomial mono_negate_exps(const Monomial& a) {
  Monomial out = a;
  for (auto& [g, e] : out.factors) e = -e;
  return out;
}

bool mono_radicals_in_range(const Monomial& a) {
  for (const auto& [g, e] : a.factors)
    if (g.tag == Gen::Tag::Radical && (e < 0 || e >= g.root)) return false;
  return true;
}

bool mono_has_radicals(const Monomial& a) {
  for (const auto& [g, e] : a.factors)
    if (g.tag == Gen::Tag::Radical) return true;
  return false;
}

bool mono_divides(const Monomial& a, const Monomial& b) {
  // a | b : every exponent of a is <= the matching exponent of b.
  size_t j = 0;
  for (const auto& [g, e] : a.factors) {
    while (j < b.factors.size() && Gen::compare(b.factors[j].first, g) < 0) ++j;
    if (j == b.factors.size() || Gen::compare(b.factors[j].first, g) != 0) return false;
    if (b.factors[j].second < e) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Polynomials

bool Poly::is_constant() const {
  return terms.empty() || (terms.size() == 1 && terms.front().first.is_unit());
}

Rational Poly::constant_value() const {
  if (terms.empty()) return Rational(0);
  return terms.front().second;
}

int Poly::compare(const Poly& a, const Poly& b) {
  if (a.terms.size() != b.terms.size()) return a.terms.size() < b.terms.size() ? -1 : 1;
  for (size_t i = 0; i < a.terms.size(); ++i) {
    int c = Monomial::compare(a.terms[i].first, b.terms[i].first);
    if (c != 0) return c;
    if (a.terms[i].second != b.terms[i].second)
      return a.terms[i].second < b.terms[i].second ? -1 : 1;
  }
  return 0;
}

Poly poly_zero() { return Poly{}; }

Poly poly_const(const Rational& c) {
  Poly p;
  if (c != 0) p.terms.emplace_back(mono_unit(), c);
  return p;
}

Poly poly_gen(const Gen& g, int exponent) {
  Poly p;
  if (exponent == 0) return poly_const(1);
  Monomial m;
  m.factors.emplace_back(g, exponent);
  p.terms.emplace_back(std::move(m), Rational(1));
  return p;
}

namespace {

// Terms sorted descending by monomial (leading term first).
void poly_sort(Poly& p) {
  std::sort(p.terms.begin(), p.terms.end(), [](const auto& a, const auto& b) {
    return Monomial::compare(a.first, b.first) > 0;
  });
}

Poly poly_from_terms(std::vector<std::pair<Monomial, Rational>> terms) {
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    return Monomial::compare(a.first, b.first) > 0;
  });
  Poly out;
  for (auto& [m, c] : terms) {
    if (!out.terms.empty() && Monomial::compare(out.terms.back().first, m) == 0) {
      out.terms.back().second += c;
      if (out.terms.back().second == 0) out.terms.pop_back();
    } else if (c != 0) {
      out.terms.emplace_back(std::move(m), std::move(c));
    }
  }
  return out;
}

}  // namespace

Poly poly_add(const Poly& a, const Poly& b) {
  std::vector<std::pair<Monomial, Rational>> terms = a.terms;
  terms.insert(terms.end(), b.terms.begin(), b.terms.end());
  return poly_from_terms(std::move(terms));
}

Poly poly_neg(const Poly& a) {
  Poly out = a;
  for (auto& [m, c] : out.terms) c = -c;
  return out;
}

Poly poly_scale(const Poly& a, const Rational& c) {
  if (c == 0) return poly_zero();
  Poly out = a;
  for (auto& [m, v] : out.terms) v *= c;
  return out;
}

bool poly_equal(const Poly& a, const Poly& b) { return Poly::compare(a, b) == 0; }

namespace {

// Plain product; caller guarantees no radical exponent leaves its range
// (true whenever one side is radical-free).
Poly poly_mul_plain(const Poly& a, const Poly& b) {
  std::vector<std::pair<Monomial, Rational>> terms;
  terms.reserve(a.terms.size() * b.terms.size());
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) terms.emplace_back(mono_merge(ma, mb), ca * cb);
  return poly_from_terms(std::move(terms));
}

bool poly_has_radicals(const Poly& p) {
  for (const auto& [m, c] : p.terms)
    if (mono_has_radicals(m)) return true;
  return false;
}

RatFunc rf_make(Poly num, Poly den);
RatFunc rf_from_term(const Rational& coeff, const Monomial& raw);

// Product that folds radical powers (r^root -> base) through quotient
// arithmetic when needed.
RatFunc poly_mul_fold(const Poly& a, const Poly& b) {
  std::vector<std::pair<Monomial, Rational>> plain;
  RatFunc extra;  // zero
  bool have_extra = false;
  for (const auto& [ma, ca] : a.terms) {
    for (const auto& [mb, cb] : b.terms) {
      Monomial m = mono_merge(ma, mb);
      if (mono_radicals_in_range(m)) {
        plain.emplace_back(std::move(m), ca * cb);
      } else {
        RatFunc t = rf_from_term(ca * cb, m);
        extra = have_extra ? rf_add(extra, t) : t;
        have_extra = true;
      }
    }
  }
  RatFunc base{poly_from_terms(std::move(plain)), poly_const(1)};
  return have_extra ? rf_add(base, extra) : base;
}

// Monomial content: per-generator minimum exponent over all terms (counting
// absent generators as zero), so the reduced polynomial has all exponents
// >= 0 and at least one zero exponent per generator.
Monomial poly_content(const Poly& p) {
  if (p.terms.empty()) return mono_unit();
  // Generator -> min exponent, walking sorted factor lists in parallel.
  std::vector<std::pair<Gen, int>> mins = p.terms.front().first.factors;
  for (size_t k = 1; k < p.terms.size() && !mins.empty(); ++k) {
    const auto& f = p.terms[k].first.factors;
    std::vector<std::pair<Gen, int>> next;
    size_t i = 0, j = 0;
    while (i < mins.size() && j < f.size()) {
      int c = Gen::compare(mins[i].first, f[j].first);
      if (c < 0) {
        if (mins[i].second < 0) next.push_back(mins[i]);  // absent => 0
        ++i;
      } else if (c > 0) {
        if (f[j].second < 0) next.push_back(f[j]);
        ++j;
      } else {
        next.emplace_back(mins[i].first, std::min(mins[i].second, f[j].second));
        ++i;
        ++j;
      }
    }
    while (i < mins.size()) {
      if (mins[i].second < 0) next.push_back(mins[i]);
      ++i;
    }
    while (j < f.size()) {
      if (f[j].second < 0) next.push_back(f[j]);
      ++j;
    }
    mins = std::move(next);
  }
  Monomial m;
  for (auto& [g, e] : mins)
    if (e != 0) m.factors.emplace_back(g, e);
  return m;
}

Poly poly_mul_monomial(const Poly& p, const Monomial& m, const Rational& c) {
  Poly out;
  out.terms.reserve(p.terms.size());
  for (const auto& [mm, cc] : p.terms) out.terms.emplace_back(mono_merge(mm, m), cc * c);
  poly_sort(out);
  return out;
}

}  // namespace

std::optional<Poly> poly_exact_div(const Poly& a, const Poly& b) {
  if (b.is_zero()) return std::nullopt;
  if (a.is_zero()) return poly_zero();
  if (poly_has_radicals(a) || poly_has_radicals(b)) return std::nullopt;
  // Shift both so every exponent is nonnegative; a/b is unchanged when we
  // shift both by their contents and track the ratio separately -- callers
  // pass content-free polynomials, but be safe.
  Monomial ca = poly_content(a), cb = poly_content(b);
  Poly p = poly_mul_monomial(a, mono_negate_exps(ca), 1);
  Poly q = poly_mul_monomial(b, mono_negate_exps(cb), 1);
  Poly quotient;
  int steps = 0;
  const int max_steps = 20000;
  while (!p.is_zero()) {
    if (++steps > max_steps) return std::nullopt;
    const auto& [lm, lc] = p.terms.front();
    const auto& [qm, qc] = q.terms.front();
    if (!mono_divides(qm, lm)) return std::nullopt;
    Monomial t = mono_merge(lm, mono_negate_exps(qm));
    Rational tc = lc / qc;
    quotient.terms.emplace_back(t, tc);
    p = poly_add(p, poly_mul_monomial(q, t, -tc));
  }
  poly_sort(quotient);
  // Reattach the content ratio.
  Monomial shift = mono_merge(ca, mono_negate_exps(cb));
  if (!shift.factors.empty()) quotient = poly_mul_monomial(quotient, shift, 1);
  return quotient;
}

std::optional<Poly> poly_subst_const(const Poly& p, const std::string& symbol,
                                     const Rational& value) {
  std::vector<std::pair<Monomial, Rational>> terms;
  for (const auto& [m, c] : p.terms) {
    Monomial out;
    Rational coeff = c;
    for (const auto& [g, e] : m.factors) {
      if (g.tag == Gen::Tag::Symbol && g.name == symbol) {
        if (value == 0 && e < 0) return std::nullopt;
        coeff *= rat_pow(value, e);
      } else {
        if (g.tag != Gen::Tag::Symbol) {
          // Substitution inside opaque arguments is not attempted here.
          for (const auto& s : rf_symbols(RatFunc{poly_gen(g, 1), poly_const(1)}))
            if (s == symbol) return std::nullopt;
        }
        out.factors.emplace_back(g, e);
      }
    }
    terms.emplace_back(std::move(out), std::move(coeff));
  }
  return poly_from_terms(std::move(terms));
}

// ---------------------------------------------------------------------------
// Quotients

Rational RatFunc::constant_value() const {
  return num.constant_value() / den.constant_value();
}

int RatFunc::compare(const RatFunc& a, const RatFunc& b) {
  int c = Poly::compare(a.num, b.num);
  if (c != 0) return c;
  return Poly::compare(a.den, b.den);
}

RatFunc rf_const(const Rational& c) { return RatFunc{poly_const(c), poly_const(1)}; }

bool rf_equal(const RatFunc& a, const RatFunc& b) { return RatFunc::compare(a, b) == 0; }

namespace {

// Canonical constructor: extracts monomial content, folds single-term
// denominators into the numerator, attempts exact division, and scales the
// denominator's leading coefficient to 1.
RatFunc rf_make(Poly num, Poly den) {
  if (den.is_zero()) throw std::domain_error("division by identically-zero denominator");
  if (num.is_zero()) return RatFunc{};
  DepthGuard guard;

  Monomial cn = poly_content(num);
  Monomial cd = poly_content(den);
  Poly n = poly_mul_monomial(num, mono_negate_exps(cn), 1);
  Poly d = poly_mul_monomial(den, mono_negate_exps(cd), 1);
  Monomial shift = mono_merge(cn, mono_negate_exps(cd));

  RatFunc core;
  if (d.terms.size() == 1) {
    // Content extraction left a constant.
    core = RatFunc{poly_scale(n, Rational(1) / d.terms.front().second), poly_const(1)};
  } else if (auto q = poly_exact_div(n, d)) {
    core = RatFunc{std::move(*q), poly_const(1)};
  } else {
    Rational lead = d.terms.front().second;
    core = RatFunc{poly_scale(n, Rational(1) / lead), poly_scale(d, Rational(1) / lead)};
  }

  if (shift.factors.empty()) return core;
  if (mono_radicals_in_range(shift) &&
      (!mono_has_radicals(shift) || !poly_has_radicals(core.num))) {
    // Fast path: plain monomial reattachment cannot overflow radical ranges.
    bool safe = true;
    if (mono_has_radicals(shift)) {
      for (const auto& [m, c] : core.num.terms)
        if (mono_has_radicals(m)) safe = false;
    }
    if (safe) {
      core.num = poly_mul_monomial(core.num, shift, 1);
      return core;
    }
  }
  return rf_mul(core, rf_from_term(Rational(1), shift));
}

// coeff * monomial with arbitrary integer exponents -> canonical quotient,
// folding radical powers through their bases.
RatFunc rf_from_term(const Rational& coeff, const Monomial& raw) {
  DepthGuard guard;
  Monomial plain;
  RatFunc acc = rf_const(coeff);
  for (const auto& [g, e] : raw.factors) {
    if (g.tag != Gen::Tag::Radical) {
      if (e != 0) plain.factors.emplace_back(g, e);
      continue;
    }
    int q = g.root;
    int rem = ((e % q) + q) % q;
    int d = (e - rem) / q;
    if (rem != 0) plain.factors.emplace_back(g, rem);
    if (d != 0) {
      if (!g.base_rf) throw std::logic_error("radical generator without base");
      acc = rf_mul(acc, rf_pow(*g.base_rf, d));
    }
  }
  std::sort(plain.factors.begin(), plain.factors.end(),
            [](const auto& a, const auto& b) { return Gen::compare(a.first, b.first) < 0; });
  Poly mono;
  mono.terms.emplace_back(std::move(plain), Rational(1));
  return rf_mul(acc, RatFunc{std::move(mono), poly_const(1)});
}

}  // namespace

RatFunc rf_gen(const Gen& g, int exponent) {
  if (exponent == 0) return rf_const(1);
  Monomial m;
  m.factors.emplace_back(g, exponent);
  return rf_from_term(Rational(1), m);
}

RatFunc rf_term(const Monomial& m, const Rational& coeff) {
  if (coeff == 0) return RatFunc{};
  return rf_from_term(coeff, m);
}

RatFunc rf_add(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  DepthGuard guard;
  if (poly_equal(a.den, b.den)) return rf_make(poly_add(a.num, b.num), a.den);
  // Denominators are radical-free by construction, so plain products are
  // safe between them; numerator-by-denominator products fold if needed.
  RatFunc x = poly_mul_fold(a.num, b.den);
  RatFunc y = poly_mul_fold(b.num, a.den);
  Poly dd = poly_mul_plain(a.den, b.den);
  if (x.den.is_constant() && y.den.is_constant() && x.den.constant_value() == 1 &&
      y.den.constant_value() == 1) {
    return rf_make(poly_add(x.num, y.num), dd);
  }
  RatFunc sum = rf_add(x, y);
  return rf_div(sum, RatFunc{dd, poly_const(1)});
}

RatFunc rf_sub(const RatFunc& a, const RatFunc& b) { return rf_add(a, rf_neg(b)); }

RatFunc rf_neg(const RatFunc& a) { return RatFunc{poly_neg(a.num), a.den}; }

RatFunc rf_mul(const RatFunc& a, const RatFunc& b) {
  if (a.is_zero() || b.is_zero()) return RatFunc{};
  DepthGuard guard;
  RatFunc nn = poly_mul_fold(a.num, b.num);
  Poly dd = poly_mul_plain(a.den, b.den);
  // nn may itself carry a denominator from radical folding.
  return rf_make(nn.num, poly_mul_plain(nn.den, dd));
}

RatFunc rf_div(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw std::domain_error("division by identically-zero denominator");
  if (a.is_zero()) return RatFunc{};
  DepthGuard guard;
  // a / b = (a.num * b.den) / (a.den * b.num); b.num may carry radicals, so
  // route the denominator product through folding as well.
  RatFunc nn = poly_mul_fold(a.num, b.den);
  RatFunc dd = poly_mul_fold(a.den, b.num);
  // (nn / dd) with possible inner denominators (radical-free).
  Poly top = poly_mul_plain(nn.num, dd.den);
  RatFunc bottom = poly_mul_fold(dd.num, nn.den);
  if (bottom.den.is_constant() && bottom.den.constant_value() == 1)
    return rf_make(std::move(top), bottom.num);
  return rf_div(RatFunc{std::move(top), poly_const(1)}, bottom);
}

RatFunc rf_pow(const RatFunc& a, long k) {
  if (k == 0) return rf_const(1);
  RatFunc base = a;
  if (k < 0) {
    if (a.is_zero()) throw std::domain_error("zero to a negative power");
    base = rf_div(rf_const(1), a);
    k = -k;
  }
  RatFunc acc = rf_const(1);
  while (k) {
    if (k & 1) acc = rf_mul(acc, base);
    base = k > 1 ? rf_mul(base, base) : base;
    k >>= 1;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Lowering expression trees

namespace {

RatFunc canon_pow(const Expr& base, const Rational& exponent, const Context& ctx);

RatFunc canon_impl(const Expr& e, const Context& ctx) {
  switch (e.kind()) {
    case NodeKind::Number:
      return rf_const(e.number_value());
    case NodeKind::Symbol: {
      SymbolRole r = ctx.role(e.name());
      if (r == SymbolRole::Unknown)
        throw std::invalid_argument("undeclared identifier '" + e.name() + "'");
      if (r == SymbolRole::AtomName)
        throw std::invalid_argument("function atom '" + e.name() + "' used without arguments");
      return rf_gen(Gen::sym(e.name()));
    }
    case NodeKind::Add: {
      RatFunc acc;
      for (const auto& t : e.operands()) acc = rf_add(acc, canon_impl(t, ctx));
      return acc;
    }
    case NodeKind::Mul: {
      RatFunc acc = rf_const(1);
      for (const auto& f : e.operands()) acc = rf_mul(acc, canon_impl(f, ctx));
      return acc;
    }
    case NodeKind::Div:
      return rf_div(canon_impl(e.operands()[0], ctx), canon_impl(e.operands()[1], ctx));
    case NodeKind::Pow:
      return canon_pow(e.operands()[0], e.exponent(), ctx);
    case NodeKind::Call: {
      const std::string& fn = e.name();
      if (fn == "sqrt") return canon_pow(e.operands()[0], Rational(1, 2), ctx);
      if (fn == "ln") {
        const Expr& arg = e.operands()[0];
        // ln(b^k) -> k ln(b) for literal integer powers, to reduce aliasing.
        if (arg.kind() == NodeKind::Pow && is_integer(arg.exponent())) {
          long k = arg.exponent().template convert_to<long>();
          return rf_mul(rf_const(Rational(k)),
                        canon_impl(Expr::call("ln", {arg.operands()[0]}), ctx));
        }
        RatFunc a = canon_impl(arg, ctx);
        if (a.is_constant() && a.constant_value() == 1) return RatFunc{};
        return rf_gen(Gen::call("ln", {uncanon(a)}));
      }
      if (fn == "exp") {
        RatFunc a = canon_impl(e.operands()[0], ctx);
        if (a.is_zero()) return rf_const(1);
        return rf_gen(Gen::call("exp", {uncanon(a)}));
      }
      if (fn == "sin" || fn == "cos") {
        RatFunc a = canon_impl(e.operands()[0], ctx);
        if (a.is_zero()) return rf_const(fn == "sin" ? 0 : 1);
        return rf_gen(Gen::call(fn, {uncanon(a)}));
      }
      const AtomDecl* atom = ctx.atom(fn);
      if (atom == nullptr) throw std::invalid_argument("unknown function '" + fn + "'");
      if (atom->formals.size() != e.operands().size())
        throw std::invalid_argument("wrong argument count for '" + fn + "'");
      std::vector<Expr> args;
      args.reserve(e.operands().size());
      for (const auto& a : e.operands()) args.push_back(uncanon(canon_impl(a, ctx)));
      return rf_gen(Gen::call(fn, std::move(args)));
    }
  }
  throw std::logic_error("unhandled node kind");
}

RatFunc canon_pow(const Expr& base, const Rational& exponent, const Context& ctx) {
  RatFunc b = canon_impl(base, ctx);
  if (is_integer(exponent)) return rf_pow(b, exponent.template convert_to<long>());
  BigInt p = rat_num(exponent);
  BigInt q = rat_den(exponent);
  if (q > 16) throw std::invalid_argument("radical root too large");
  int root = q.template convert_to<int>();
  if (b.is_zero()) {
    if (p <= 0) throw std::domain_error("zero to a non-positive fractional power");
    return RatFunc{};
  }
  if (b.is_constant()) {
    Rational c = b.constant_value();
    BigInt rn, rd;
    if (c > 0 && exact_root(rat_num(c), root, rn) && exact_root(rat_den(c), root, rd)) {
      return rf_const(rat_pow(Rational(rn, rd), p.template convert_to<long>()));
    }
  }
  Gen g = Gen::radical(uncanon(b), root);
  g.base_rf = std::make_shared<const RatFunc>(b);
  Monomial m;
  m.factors.emplace_back(std::move(g), static_cast<int>(p.template convert_to<long>()));
  return rf_from_term(Rational(1), m);
}

}  // namespace

RatFunc canon(const Expr& e, const Context& ctx) { return canon_impl(e, ctx); }

// ---------------------------------------------------------------------------
// Lifting back to trees

namespace {

Expr gen_to_expr(const Gen& g, int exponent) {
  Expr base;
  switch (g.tag) {
    case Gen::Tag::Symbol:
      base = Expr::symbol(g.name);
      break;
    case Gen::Tag::Call:
      base = Expr::call(g.name, g.args);
      break;
    case Gen::Tag::Radical:
      base = Expr::pow(g.base, Rational(1, g.root));
      break;
  }
  if (exponent == 1) return base;
  return Expr::pow(std::move(base), Rational(exponent));
}

Expr term_to_expr(const Monomial& m, const Rational& coeff) {
  std::vector<Expr> top;
  std::vector<Expr> bottom;
  for (const auto& [g, e] : m.factors) {
    if (e > 0)
      top.push_back(gen_to_expr(g, e));
    else
      bottom.push_back(gen_to_expr(g, -e));
  }
  Expr numerator;
  if (top.empty()) {
    numerator = Expr::number(coeff);
  } else {
    std::vector<Expr> fs;
    if (coeff != 1) fs.push_back(Expr::number(coeff));
    fs.insert(fs.end(), top.begin(), top.end());
    numerator = Expr::mul(std::move(fs));
  }
  if (bottom.empty()) return numerator;
  return Expr::div(numerator, Expr::mul(std::move(bottom)));
}

}  // namespace

Expr uncanon_poly(const Poly& p) {
  if (p.is_zero()) return Expr::number(0);
  std::vector<Expr> terms;
  terms.reserve(p.terms.size());
  for (const auto& [m, c] : p.terms) terms.push_back(term_to_expr(m, c));
  return Expr::add(std::move(terms));
}

Expr uncanon(const RatFunc& f) {
  Expr n = uncanon_poly(f.num);
  if (f.den.is_constant() && f.den.constant_value() == 1) return n;
  return Expr::div(n, uncanon_poly(f.den));
}

Expr normalize(const Expr& e, const Context& ctx) { return uncanon(canon(e, ctx)); }

bool symbolic_zero(const Expr& e, const Context& ctx) { return canon(e, ctx).is_zero(); }

// ---------------------------------------------------------------------------

namespace {

void collect_symbols_expr(const Expr& e, std::vector<std::string>& out);

void collect_symbols_gen(const Gen& g, std::vector<std::string>& out) {
  switch (g.tag) {
    case Gen::Tag::Symbol:
      out.push_back(g.name);
      break;
    case Gen::Tag::Call:
      for (const auto& a : g.args) collect_symbols_expr(a, out);
      break;
    case Gen::Tag::Radical:
      collect_symbols_expr(g.base, out);
      break;
  }
}

void collect_symbols_expr(const Expr& e, std::vector<std::string>& out) {
  switch (e.kind()) {
    case NodeKind::Symbol:
      out.push_back(e.name());
      break;
    case NodeKind::Call:
    case NodeKind::Add:
    case NodeKind::Mul:
    case NodeKind::Div:
    case NodeKind::Pow:
      for (const auto& o : e.operands()) collect_symbols_expr(o, out);
      break;
    default:
      break;
  }
}

}  // namespace

std::vector<std::string> rf_symbols(const RatFunc& f) {
  std::vector<std::string> out;
  for (const Poly* p : {&f.num, &f.den})
    for (const auto& [m, c] : p->terms)
      for (const auto& [g, e] : m.factors) collect_symbols_gen(g, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Expr> special_factors(const RatFunc& residual, const Context& ctx) {
  std::vector<Expr> factors;
  if (residual.is_zero()) return factors;
  Poly p = residual.num;
  static const Rational roots[] = {Rational(1),     Rational(-1),    Rational(2),
                                   Rational(-2),    Rational(1, 2),  Rational(-1, 2),
                                   Rational(0)};
  for (const auto& param : ctx.params()) {
    for (const auto& c : roots) {
      for (int round = 0; round < 4; ++round) {
        auto at = poly_subst_const(p, param.name, c);
        if (!at || !at->is_zero()) break;
        // (param - c) divides p.
        Poly divisor = poly_add(poly_gen(Gen::sym(param.name)), poly_const(-c));
        auto q = poly_exact_div(p, divisor);
        if (!q) break;
        factors.push_back(c == 0 ? Expr::symbol(param.name)
                                 : Expr::symbol(param.name) - Expr::number(c));
        p = std::move(*q);
      }
    }
  }
  return factors;
}

}  // namespace stosym
