#include "noether/symbolic/simplify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

namespace noether::sym {

namespace {

// ---------------------------------------------------------------------------
// Sparse polynomials over interned kernels.

using KernelId = std::uint32_t;
using Monomial = std::vector<std::pair<KernelId, std::int32_t>>;  // sorted by id, exponents > 0
using Poly = std::map<Monomial, Rational>;

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

std::int32_t mono_exponent(const Monomial& m, KernelId id) {
  for (const auto& [k, e] : m) {
    if (k == id) return e;
  }
  return 0;
}

bool mono_divides(const Monomial& d, const Monomial& m) {
  for (const auto& [k, e] : d) {
    if (mono_exponent(m, k) < e) return false;
  }
  return true;
}

// m / d, assuming d divides m.
Monomial mono_div(const Monomial& m, const Monomial& d) {
  Monomial out;
  for (const auto& [k, e] : m) {
    const std::int32_t r = e - mono_exponent(d, k);
    if (r > 0) out.emplace_back(k, r);
  }
  return out;
}

Monomial mono_gcd(const Monomial& a, const Monomial& b) {
  Monomial out;
  for (const auto& [k, e] : a) {
    const std::int32_t f = std::min(e, mono_exponent(b, k));
    if (f > 0) out.emplace_back(k, f);
  }
  return out;
}

Monomial mono_lcm(const Monomial& a, const Monomial& b) {
  Monomial out = a;
  for (const auto& [k, e] : b) {
    auto it = std::find_if(out.begin(), out.end(), [k = k](const auto& p) { return p.first == k; });
    if (it == out.end()) {
      out.emplace_back(k, e);
    } else {
      it->second = std::max(it->second, e);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Monomial mono_with_exponent(const Monomial& m, KernelId id, std::int32_t e) {
  Monomial out;
  for (const auto& p : m) {
    if (p.first == id) {
      if (e > 0) out.emplace_back(id, e);
    } else {
      out.push_back(p);
    }
  }
  return out;
}

// Lexicographic monomial order with smaller kernel ids as the leading variables.
bool lex_less(const Monomial& a, const Monomial& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size()) return false;
    if (i == a.size()) return true;
    if (a[i].first == b[j].first) {
      if (a[i].second != b[j].second) return a[i].second < b[j].second;
      ++i;
      ++j;
    } else {
      return a[i].first > b[j].first;
    }
  }
  return false;
}

void poly_add_term(Poly& p, const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = p.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

Poly poly_const(const Rational& c) {
  Poly p;
  if (c != 0) p.emplace(Monomial{}, c);
  return p;
}

bool poly_is_constant(const Poly& p) { return p.empty() || (p.size() == 1 && p.begin()->first.empty()); }

Rational poly_constant_value(const Poly& p) { return p.empty() ? Rational(0) : p.begin()->second; }

Poly poly_scale(const Poly& p, const Rational& c, const Monomial& shift = {}) {
  Poly out;
  if (c == 0) return out;
  for (const auto& [m, v] : p) out.emplace(shift.empty() ? m : mono_mul(m, shift), v * c);
  return out;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [m, c] : b) poly_add_term(out, m, c);
  return out;
}

Poly poly_mul_raw(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) poly_add_term(out, mono_mul(ma, mb), ca * cb);
  }
  return out;
}

std::pair<Monomial, Rational> leading_term(const Poly& p) {
  auto best = p.begin();
  for (auto it = std::next(p.begin()); it != p.end(); ++it) {
    if (lex_less(best->first, it->first)) best = it;
  }
  return *best;
}

// Exact quotient a / f in the polynomial ring, or nullopt.
std::optional<Poly> exact_divide(Poly a, const Poly& f) {
  if (poly_is_constant(f)) return poly_scale(a, Rational(1) / poly_constant_value(f));
  const auto [mf, cf] = leading_term(f);
  Poly q;
  int guard = 0;
  while (!a.empty()) {
    if (++guard > 4000) return std::nullopt;
    const auto [ma, ca] = leading_term(a);
    if (!mono_divides(mf, ma)) return std::nullopt;
    const Monomial mq = mono_div(ma, mf);
    const Rational cq = ca / cf;
    poly_add_term(q, mq, cq);
    for (const auto& [m, c] : f) poly_add_term(a, mono_mul(m, mq), -cq * c);
  }
  return q;
}

struct Content {
  Rational coefficient;  // positive
  Monomial monomial;
  Poly rest;
};

Content split_content(const Poly& p) {
  Content out;
  mpz_class num_gcd = 0;
  mpz_class den_lcm = 1;
  bool first = true;
  Monomial g;
  for (const auto& [m, c] : p) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    g = first ? m : mono_gcd(g, m);
    first = false;
  }
  out.coefficient = Rational(num_gcd, den_lcm);
  out.coefficient.canonicalize();
  if (out.coefficient == 0) out.coefficient = 1;
  out.monomial = g;
  for (const auto& [m, c] : p) out.rest.emplace(g.empty() ? m : mono_div(m, g), c / out.coefficient);
  return out;
}

// Make the first term (in map order) positive; returns the sign removed.
int normalize_sign(Poly& p) {
  if (p.empty() || p.begin()->second > 0) return 1;
  for (auto& [m, c] : p) c = -c;
  return -1;
}

// ---------------------------------------------------------------------------
// Canonical expression assembly.

std::pair<Rational, Expr> split_coefficient(const Expr& term) {
  if (term.is_number()) return {term.value(), Expr(1L)};
  if (term.kind() == Kind::mul && term.operands().front().is_number()) {
    std::vector<Expr> rest(term.operands().begin() + 1, term.operands().end());
    return {term.operands().front().value(), Expr::mul(std::move(rest))};
  }
  return {Rational(1), term};
}

bool term_less(const Expr& a, const Expr& b) {
  const auto [ca, ma] = split_coefficient(a);
  const auto [cb, mb] = split_coefficient(b);
  const int c = compare(ma, mb);
  if (c != 0) return c < 0;
  return ca < cb;
}

Expr canonical_product(const Rational& coefficient, std::vector<Expr> factors) {
  if (coefficient == 0) return Expr(0L);
  std::sort(factors.begin(), factors.end(), ExprLess{});
  factors.insert(factors.begin(), Expr(coefficient));
  return Expr::mul(std::move(factors));
}

Expr canonical_sum(std::vector<Expr> terms) {
  std::sort(terms.begin(), terms.end(), term_less);
  return Expr::add(std::move(terms));
}

bool leading_negative(const Expr& e) {
  if (e.is_number()) return e.value() < 0;
  if (e.kind() == Kind::add) return leading_negative(e.operands().front());
  if (e.kind() == Kind::mul && e.operands().front().is_number()) return e.operands().front().value() < 0;
  return false;
}

// ---------------------------------------------------------------------------
// Kernels and the normal form N / (monomial * prod factor^k).

enum class KernelKind { atom, sin, cos, exp, ln, root };

struct Kernel {
  Expr expr;
  KernelKind kind = KernelKind::atom;
  Expr arg;          // sin/cos/exp/ln argument; root base
  int degree = 0;    // root index
  Poly base;         // root base polynomial
  KernelId partner = 0;
};

struct Frac {
  Poly num;
  Monomial den;
  std::map<Poly, int> factors;
};

class Normalizer {
 public:
  Frac convert(const Expr& e) {
    if (auto it = memo_.find(e); it != memo_.end()) return it->second;
    Frac f = convert_uncached(e);
    memo_.emplace(e, f);
    return f;
  }

  Expr to_expr(const Frac& f) {
    if (f.num.empty()) return Expr(0L);
    // Factor signs are fixed by the expression order, not by kernel ids, so the
    // output does not depend on interning order.
    Rational sign(1);
    std::vector<Expr> pieces;
    for (const auto& [poly, k] : f.factors) {
      Expr fe = poly_expr(poly);
      std::vector<Expr> fterms =
          fe.kind() == Kind::add ? fe.operands() : std::vector<Expr>{fe};
      const auto first = *std::min_element(fterms.begin(), fterms.end(), term_less);
      if (split_coefficient(first).first < 0) {
        fe = poly_expr(poly_scale(poly, Rational(-1)));
        if (k % 2 != 0) sign = -sign;
      }
      pieces.push_back(Expr::pow(fe, Rational(-k)));
    }
    std::vector<Expr> terms;
    terms.reserve(f.num.size());
    for (const auto& [m, c] : f.num) terms.push_back(monomial_expr(c * sign, m, f.den));
    Expr numerator = canonical_sum(std::move(terms));
    if (pieces.empty()) return numerator;
    if (numerator.kind() == Kind::add) {
      pieces.push_back(numerator);
      return canonical_product(Rational(1), std::move(pieces));
    }
    auto [c, rest] = split_coefficient(numerator);
    if (rest.kind() == Kind::mul) {
      pieces.insert(pieces.end(), rest.operands().begin(), rest.operands().end());
    } else if (!rest.is_number(1)) {
      pieces.push_back(rest);
    }
    return canonical_product(c, std::move(pieces));
  }

  Expr canonical(const Expr& e) { return to_expr(convert(e)); }

 private:
  // -- kernel table ---------------------------------------------------------

  KernelId intern(Kernel k) {
    if (auto it = index_.find(k.expr); it != index_.end()) return it->second;
    const auto id = static_cast<KernelId>(kernels_.size());
    index_.emplace(k.expr, id);
    kernels_.push_back(std::move(k));
    return id;
  }

  KernelId atom(const Expr& e) {
    Kernel k;
    k.expr = e;
    return intern(std::move(k));
  }

  KernelId cos_kernel(const Expr& arg) {
    Kernel k;
    k.expr = Expr::func(Function::cos, arg);
    k.kind = KernelKind::cos;
    k.arg = arg;
    return intern(std::move(k));
  }

  KernelId sin_kernel(const Expr& arg) {
    const Expr key = Expr::func(Function::sin, arg);
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    const KernelId c = cos_kernel(arg);
    Kernel k;
    k.expr = key;
    k.kind = KernelKind::sin;
    k.arg = arg;
    k.partner = c;
    return intern(std::move(k));
  }

  KernelId exp_kernel(const Expr& arg) {
    Kernel k;
    k.expr = Expr::func(Function::exp, arg);
    k.kind = KernelKind::exp;
    k.arg = arg;
    return intern(std::move(k));
  }

  KernelId ln_kernel(const Expr& arg) {
    Kernel k;
    k.expr = Expr::func(Function::ln, arg);
    k.kind = KernelKind::ln;
    k.arg = arg;
    return intern(std::move(k));
  }

  KernelId root_kernel(const Poly& base, int degree) {
    const Expr base_expr = poly_expr(base);
    Kernel k;
    k.expr = Expr::pow(base_expr, Rational(1, degree));
    k.kind = KernelKind::root;
    k.arg = base_expr;
    k.degree = degree;
    k.base = base;
    return intern(std::move(k));
  }

  // -- expression assembly --------------------------------------------------

  Expr kernel_power(KernelId id, std::int32_t e) {
    const Kernel& k = kernels_[id];
    if (k.kind == KernelKind::root) return Expr::pow(k.arg, Rational(e, k.degree));
    return Expr::pow(k.expr, Rational(e));
  }

  Expr monomial_expr(const Rational& c, const Monomial& m, const Monomial& den) {
    std::vector<Expr> factors;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < m.size() || j < den.size()) {
      KernelId id;
      std::int32_t e;
      if (j == den.size() || (i < m.size() && m[i].first < den[j].first)) {
        id = m[i].first;
        e = m[i++].second;
      } else if (i == m.size() || den[j].first < m[i].first) {
        id = den[j].first;
        e = -den[j++].second;
      } else {
        id = m[i].first;
        e = m[i++].second - den[j++].second;
      }
      if (e != 0) factors.push_back(kernel_power(id, e));
    }
    return canonical_product(c, std::move(factors));
  }

  Expr poly_expr(const Poly& p) {
    std::vector<Expr> terms;
    for (const auto& [m, c] : p) terms.push_back(monomial_expr(c, m, {}));
    return canonical_sum(std::move(terms));
  }

  // -- arithmetic -----------------------------------------------------------

  Poly reduce(const Poly& p) {
    bool clean = true;
    for (const auto& [m, c] : p) {
      if (reducible(m)) {
        clean = false;
        break;
      }
    }
    if (clean) return p;
    Poly out;
    std::vector<std::pair<Monomial, Rational>> work(p.begin(), p.end());
    while (!work.empty()) {
      auto [m, c] = std::move(work.back());
      work.pop_back();
      bool rewritten = false;
      for (const auto& [id, e] : m) {
        const Kernel& k = kernels_[id];
        if (k.kind == KernelKind::sin && e >= 2) {
          const Monomial rest = mono_with_exponent(m, id, e - 2);
          work.emplace_back(rest, c);
          work.emplace_back(mono_mul(rest, Monomial{{k.partner, 2}}), -c);
          rewritten = true;
          break;
        }
        if (k.kind == KernelKind::root && e >= k.degree) {
          const Monomial rest = mono_with_exponent(m, id, e - k.degree);
          for (const auto& [bm, bc] : k.base) work.emplace_back(mono_mul(rest, bm), c * bc);
          rewritten = true;
          break;
        }
      }
      if (!rewritten) poly_add_term(out, m, c);
    }
    return out;
  }

  bool reducible(const Monomial& m) const {
    for (const auto& [id, e] : m) {
      const Kernel& k = kernels_[id];
      if (k.kind == KernelKind::sin && e >= 2) return true;
      if (k.kind == KernelKind::root && e >= k.degree) return true;
    }
    return false;
  }

  Poly mul_poly(const Poly& a, const Poly& b) { return reduce(poly_mul_raw(a, b)); }

  Poly power_poly(const Poly& p, int k) {
    Poly out = poly_const(Rational(1));
    for (int i = 0; i < k; ++i) out = mul_poly(out, p);
    return out;
  }

  Poly expand_denominator(const Monomial& mono, const std::map<Poly, int>& factors) {
    Poly out;
    out.emplace(mono, Rational(1));
    out = reduce(out);
    for (const auto& [f, k] : factors) out = mul_poly(out, power_poly(f, k));
    return out;
  }

  static Frac constant(const Rational& c) { return Frac{poly_const(c), {}, {}}; }

  Frac kernel_frac(KernelId id, std::int32_t e = 1) {
    Frac f;
    if (e >= 0) {
      f.num.emplace(e == 0 ? Monomial{} : Monomial{{id, e}}, Rational(1));
      f.num = reduce(f.num);
    } else {
      f.num = poly_const(Rational(1));
      f.den = {{id, -e}};
      cancel(f);
    }
    return f;
  }

  void cancel(Frac& f) {
    f.num = reduce(f.num);
    if (f.num.empty()) {
      f.den.clear();
      f.factors.clear();
      return;
    }
    for (int round = 0; round < 8; ++round) {
      // Common monomial factor of numerator and denominator monomial.
      Monomial g = f.den;
      for (const auto& [m, c] : f.num) {
        if (g.empty()) break;
        g = mono_gcd(g, m);
      }
      if (!g.empty()) {
        Poly num;
        for (const auto& [m, c] : f.num) num.emplace(mono_div(m, g), c);
        f.num = std::move(num);
        f.den = mono_div(f.den, g);
      }
      // Polynomial factors dividing the numerator.
      for (auto it = f.factors.begin(); it != f.factors.end();) {
        while (it->second > 0) {
          auto q = exact_divide(f.num, it->first);
          if (!q) break;
          f.num = std::move(*q);
          --it->second;
        }
        it = it->second == 0 ? f.factors.erase(it) : std::next(it);
      }
      // Rationalize radicals in the denominator monomial.
      bool changed = false;
      for (const auto& [id, e] : f.den) {
        const Kernel& k = kernels_[id];
        if (k.kind != KernelKind::root) continue;
        const int lift = k.degree - e;
        f.num = mul_poly(f.num, Poly{{Monomial{{id, lift}}, Rational(1)}});
        f.den = mono_with_exponent(f.den, id, 0);
        multiply_denominator(f, k.base);
        changed = true;
        break;
      }
      if (!changed) break;
    }
  }

  // Multiply the denominator by polynomial p.
  void multiply_denominator(Frac& f, const Poly& p) {
    Content c = split_content(p);
    const int sign = normalize_sign(c.rest);
    f.num = poly_scale(f.num, Rational(sign) / c.coefficient);
    f.den = mono_mul(f.den, c.monomial);
    if (!poly_is_constant(c.rest)) {
      f.factors[c.rest] += 1;
    } else {
      f.num = poly_scale(f.num, Rational(1) / poly_constant_value(c.rest));
    }
  }

  Frac add(const Frac& a, const Frac& b) {
    if (a.num.empty()) return b;
    if (b.num.empty()) return a;
    Frac out;
    if (a.den == b.den && a.factors == b.factors) {
      out.num = poly_add(a.num, b.num);
      out.den = a.den;
      out.factors = a.factors;
    } else {
      out.den = mono_lcm(a.den, b.den);
      out.factors = a.factors;
      for (const auto& [f, k] : b.factors) {
        auto& slot = out.factors[f];
        slot = std::max(slot, k);
      }
      out.num = poly_add(lift_numerator(a, out), lift_numerator(b, out));
    }
    cancel(out);
    return out;
  }

  // Numerator of `a` expressed over the common denominator `common`.
  Poly lift_numerator(const Frac& a, const Frac& common) {
    std::map<Poly, int> missing;
    for (const auto& [f, k] : common.factors) {
      auto it = a.factors.find(f);
      const int have = it == a.factors.end() ? 0 : it->second;
      if (k > have) missing[f] = k - have;
    }
    const Monomial shift = mono_div(common.den, a.den);
    Poly out = reduce(poly_scale(a.num, Rational(1), shift));
    for (const auto& [f, k] : missing) out = mul_poly(out, power_poly(f, k));
    return out;
  }

  Frac mul(const Frac& a, const Frac& b) {
    if (a.num.empty() || b.num.empty()) return constant(Rational(0));
    Frac out;
    out.num = mul_poly(a.num, b.num);
    out.den = mono_mul(a.den, b.den);
    out.factors = a.factors;
    for (const auto& [f, k] : b.factors) out.factors[f] += k;
    cancel(out);
    return out;
  }

  Frac scale(const Frac& a, const Rational& c) {
    Frac out = a;
    out.num = poly_scale(a.num, c);
    if (out.num.empty()) return constant(Rational(0));
    return out;
  }

  Frac invert(const Frac& a) {
    if (a.num.empty()) throw std::domain_error("division by an expression that simplifies to zero");
    Content c = split_content(a.num);
    Frac out;
    out.num = poly_scale(expand_denominator(a.den, a.factors), Rational(1) / c.coefficient);
    out.den = c.monomial;
    if (!poly_is_constant(c.rest)) {
      const int sign = normalize_sign(c.rest);
      if (sign < 0) out.num = poly_scale(out.num, Rational(-1));
      out.factors[c.rest] = 1;
    } else {
      out.num = poly_scale(out.num, Rational(1) / poly_constant_value(c.rest));
    }
    cancel(out);
    return out;
  }

  Frac power(const Frac& a, long k) {
    if (k == 0) return constant(Rational(1));
    if (k < 0) return invert(power(a, -k));
    Frac result = constant(Rational(1));
    Frac base = a;
    while (k > 0) {
      if (k & 1) result = mul(result, base);
      k >>= 1;
      if (k > 0) base = mul(base, base);
    }
    return result;
  }

  // -- conversion -----------------------------------------------------------

  Frac convert_uncached(const Expr& e) {
    const Node& n = e.node();
    switch (n.kind) {
      case Kind::number:
        return constant(n.value);
      case Kind::symbol:
      case Kind::unknown:
        return kernel_frac(atom(e));
      case Kind::add: {
        Frac acc = constant(Rational(0));
        for (const auto& t : n.operands) acc = add(acc, convert(t));
        return acc;
      }
      case Kind::mul: {
        Frac acc = constant(Rational(1));
        for (const auto& f : n.operands) acc = mul(acc, convert(f));
        return acc;
      }
      case Kind::pow:
        if (n.exponent.get_den() == 1) {
          if (!n.exponent.get_num().fits_slong_p()) throw std::overflow_error("exponent too large");
          return power(convert(n.operands[0]), n.exponent.get_num().get_si());
        }
        return root_power(n.operands[0], n.exponent);
      case Kind::func:
        return convert_function(n.fn, n.operands[0]);
    }
    return constant(Rational(0));
  }

  Frac convert_function(Function fn, const Expr& u) {
    switch (fn) {
      case Function::sin:
      case Function::cos: {
        Expr arg = canonical(u);
        if (arg.is_zero_node()) return constant(Rational(fn == Function::cos ? 1 : 0));
        const bool negative = leading_negative(arg);
        if (negative) arg = to_expr(scale(convert(arg), Rational(-1)));
        if (fn == Function::cos) return kernel_frac(cos_kernel(arg));
        Frac s = kernel_frac(sin_kernel(arg));
        return negative ? scale(s, Rational(-1)) : s;
      }
      case Function::tan:
        return mul(convert_function(Function::sin, u), invert(convert_function(Function::cos, u)));
      case Function::sec:
        return invert(convert_function(Function::cos, u));
      case Function::cot:
        return mul(convert_function(Function::cos, u), invert(convert_function(Function::sin, u)));
      case Function::sqrt:
        return root_power(u, Rational(1, 2));
      case Function::exp:
        return convert_exp(u);
      case Function::ln:
        return convert_ln(u);
    }
    return constant(Rational(0));
  }

  Frac convert_exp(const Expr& u) {
    const Frac arg = convert(u);
    if (arg.num.empty()) return constant(Rational(1));
    if (!arg.factors.empty()) return kernel_frac(exp_kernel(to_expr(arg)));
    Frac result = constant(Rational(1));
    for (const auto& [m, c] : arg.num) {
      // Term c * w with w = m / den as a Laurent monomial.
      const Expr w = monomial_expr(Rational(1), m, arg.den);
      if (w.is_number()) {
        result = mul(result, kernel_frac(atom(Expr::func(Function::exp, Expr(c)))));
        continue;
      }
      if (arg.den.empty() && m.size() == 1 && m[0].second == 1 &&
          kernels_[m[0].first].kind == KernelKind::ln) {
        const Expr inner = kernels_[m[0].first].arg;
        result = mul(result, c.get_den() == 1 ? power(convert(inner), c.get_num().get_si())
                                              : root_power(inner, c));
        continue;
      }
      if (c.get_den() == 1 && c.get_num().fits_slong_p()) {
        result = mul(result, power(kernel_frac(exp_kernel(w)), c.get_num().get_si()));
      } else {
        result = mul(result, kernel_frac(exp_kernel(canonical_product(c, {w}))));
      }
    }
    return result;
  }

  // ln of a kernel power k^1.
  Frac ln_of_kernel(KernelId id) {
    const Kernel k = kernels_[id];
    switch (k.kind) {
      case KernelKind::exp:
        return convert(k.arg);
      case KernelKind::root:
        return scale(convert_ln(k.arg), Rational(1, k.degree));
      default:
        return kernel_frac(ln_kernel(k.expr));
    }
  }

  Frac convert_ln(const Expr& u) {
    const Frac arg = convert(u);
    if (arg.num.empty()) throw std::domain_error("ln(0)");
    if (poly_is_constant(arg.num) && arg.den.empty() && arg.factors.empty()) {
      const Rational q = poly_constant_value(arg.num);
      if (q == 1) return constant(Rational(0));
      return kernel_frac(ln_kernel(Expr(q)));
    }
    Content c = split_content(arg.num);
    if (poly_is_constant(c.rest) && poly_constant_value(c.rest) < 0) {
      return kernel_frac(ln_kernel(to_expr(arg)));
    }
    Frac result = constant(Rational(0));
    if (c.coefficient != 1) result = kernel_frac(ln_kernel(Expr(c.coefficient)));
    for (const auto& [id, e] : c.monomial) result = add(result, scale(ln_of_kernel(id), Rational(e)));
    if (!poly_is_constant(c.rest)) result = add(result, kernel_frac(ln_kernel(poly_expr(c.rest))));
    for (const auto& [id, e] : arg.den) result = add(result, scale(ln_of_kernel(id), Rational(-e)));
    for (const auto& [f, k] : arg.factors) {
      result = add(result, scale(kernel_frac(ln_kernel(poly_expr(f))), Rational(-k)));
    }
    return result;
  }

  static std::optional<mpz_class> exact_root(const mpz_class& v, int n) {
    if (v < 0) return std::nullopt;
    mpz_class r;
    if (mpz_root(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(n)) != 0) return r;
    return std::nullopt;
  }

  // base^(m/n) with n > 1.
  Frac root_power(const Expr& base_expr, const Rational& q) {
    const int n = static_cast<int>(q.get_den().get_si());
    const long m = q.get_num().get_si();
    const Frac base = convert(base_expr);
    if (base.num.empty()) {
      if (m > 0) return constant(Rational(0));
      throw std::domain_error("negative power of zero");
    }
    // base = N / D  =>  base^(1/n) = (N * D^(n-1))^(1/n) / D
    Frac denominator;
    denominator.num = poly_const(Rational(1));
    denominator.den = base.den;
    denominator.factors = base.factors;
    Poly radicand = base.num;
    if (!base.den.empty() || !base.factors.empty()) {
      radicand = mul_poly(radicand, power_poly(expand_denominator(base.den, base.factors), n - 1));
    }
    Content c = split_content(radicand);
    Monomial outside;
    Monomial inside;
    for (const auto& [id, e] : c.monomial) {
      if (e / n > 0) outside.emplace_back(id, e / n);
      if (e % n > 0) inside.emplace_back(id, e % n);
    }
    Rational coefficient_out(1);
    Rational coefficient_in = c.coefficient;
    auto num_root = exact_root(c.coefficient.get_num(), n);
    auto den_root = exact_root(c.coefficient.get_den(), n);
    if (num_root && den_root) {
      coefficient_out = Rational(*num_root, *den_root);
      coefficient_in = 1;
    }
    Poly inner = poly_scale(c.rest, coefficient_in, inside);
    Frac root = constant(coefficient_out);
    if (!(poly_is_constant(inner) && poly_constant_value(inner) == 1)) {
      root = kernel_frac(root_kernel(reduce(inner), n));
      root = scale(root, coefficient_out);
    }
    if (!outside.empty()) {
      Frac out;
      out.num.emplace(outside, Rational(1));
      out.num = reduce(out.num);
      root = mul(root, out);
    }
    root = mul(root, denominator);
    return power(root, m);
  }

  std::vector<Kernel> kernels_;
  std::unordered_map<Expr, KernelId, ExprHash> index_;
  std::unordered_map<Expr, Frac, ExprHash> memo_;
};

}  // namespace

Expr simplify(const Expr& e) {
  Normalizer n;
  return n.canonical(e);
}

std::string ZeroDecision::describe() const {
  std::ostringstream os;
  switch (status) {
    case ZeroStatus::zero:
      os << "zero (symbolic)";
      break;
    case ZeroStatus::nonzero:
      os << "nonzero";
      if (witness) os << ", witness {" << witness->to_string() << "} value " << witness_value;
      break;
    case ZeroStatus::undecided:
      os << (numerically_zero() ? "undecided (numerically zero)" : "undecided");
      break;
  }
  if (status != ZeroStatus::zero) {
    os << "; samples " << stats.below_tolerance << "/" << stats.samples << " below " << kZeroTolerance
       << ", max |value| " << stats.max_abs << ", seed " << seed;
  }
  return os.str();
}

ZeroDecision is_zero(const Expr& e, const SampleDomain& domain, std::uint64_t seed) {
  ZeroDecision decision;
  decision.seed = seed;
  Expr target = e;
  try {
    target = simplify(e);
    if (target.is_zero_node()) {
      decision.status = ZeroStatus::zero;
      decision.symbolic = true;
      return decision;
    }
  } catch (const std::exception&) {
    target = e;
  }
  Rng rng(seed);
  RandomRealizations realizations(seed ^ 0xa5a5a5a5ULL);
  const UnknownResolver resolver =
      target.contains_unknowns() ? realizations.resolver() : UnknownResolver{};
  const int max_draws = kZeroSamples * 20;
  for (int draw = 0; draw < max_draws && decision.stats.samples < kZeroSamples; ++draw) {
    const Point p = domain.draw(rng);
    double v = 0.0;
    try {
      v = eval_numeric(target, p, resolver);
    } catch (const EvalError&) {
      ++decision.stats.skipped_singular;
      continue;
    }
    ++decision.stats.samples;
    const double mag = std::fabs(v);
    decision.stats.max_abs = std::max(decision.stats.max_abs, mag);
    if (mag < kZeroTolerance) ++decision.stats.below_tolerance;
    if (mag >= kNonzeroThreshold && !decision.witness) {
      decision.witness = p;
      decision.witness_value = v;
    }
  }
  decision.status = decision.witness ? ZeroStatus::nonzero : ZeroStatus::undecided;
  return decision;
}

Rational rationalize(double x, long max_den) {
  if (!std::isfinite(x)) throw std::domain_error("cannot rationalize a non-finite value");
  const bool negative = x < 0;
  double v = std::fabs(x);
  // Continued-fraction convergents.
  mpz_class h_prev = 1, h = static_cast<long>(std::floor(v));
  mpz_class k_prev = 0, k = 1;
  double frac = v - std::floor(v);
  for (int i = 0; i < 40 && frac > 1e-15; ++i) {
    const double inv = 1.0 / frac;
    const auto a = static_cast<long>(std::floor(inv));
    mpz_class h_next = a * h + h_prev;
    mpz_class k_next = a * k + k_prev;
    if (k_next > max_den) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    frac = inv - static_cast<double>(a);
    if (std::fabs(Rational(h, k).get_d() - v) < 1e-14 * std::max(1.0, v)) break;
  }
  Rational q(h, k);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::optional<Rational> proportionality_constant(const Expr& lhs, const Expr& rhs,
                                                 const SampleDomain& domain, std::uint64_t seed) {
  const Expr l = simplify(lhs);
  const Expr r = simplify(rhs);
  Rng rng(seed);
  RandomRealizations realizations(seed ^ 0x3c3c3c3cULL);
  const bool unknowns = l.contains_unknowns() || r.contains_unknowns();
  const UnknownResolver resolver = unknowns ? realizations.resolver() : UnknownResolver{};
  for (int draw = 0; draw < 200; ++draw) {
    const Point p = domain.draw(rng);
    double lv = 0.0;
    double rv = 0.0;
    try {
      lv = eval_numeric(l, p, resolver);
      rv = eval_numeric(r, p, resolver);
    } catch (const EvalError&) {
      continue;
    }
    if (std::fabs(rv) < 1e-6) continue;
    const Rational c = rationalize(lv / rv, 10000);
    if (c == 0) return std::nullopt;
    if (is_zero(l - Expr(c) * r, domain, seed).accepted_zero()) return c;
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace noether::sym
