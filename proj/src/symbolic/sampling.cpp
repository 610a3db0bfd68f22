#include "noether/symbolic/sampling.hpp"

#include <cmath>
#include <numbers>

#include "noether/symbolic/calculus.hpp"

namespace noether::sym {

std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

long Rng::integer(long lo, long hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<long>(next() % span);
}

SampleDomain SampleDomain::standard() {
  SampleDomain d;
  const double pi = std::numbers::pi;
  d.with_range(Symbol::s, {0.1, 2.0})
      .with_range(Symbol::t, {-1.0, 1.0})
      .with_range(Symbol::r, {0.5, 5.0})
      .with_range(Symbol::theta, {0.3, pi - 0.3})
      .with_range(Symbol::phi, {0.0, 2.0 * pi});
  for (Symbol v : kVelocities) d.with_range(v, {-1.0, 1.0});
  d.with_fixed(Symbol::alpha, 1.0)
      .with_fixed(Symbol::beta, 1.0)
      .with_fixed(Symbol::a, 1.0)
      .with_fixed(Symbol::b, 2.0)
      .with_fixed(Symbol::p, 0.25);
  return d;
}

Point SampleDomain::draw(Rng& rng) const {
  Point p;
  for (std::size_t i = 0; i < kSymbolCount; ++i) {
    const auto s = static_cast<Symbol>(i);
    if (fixed[i]) {
      p.set(s, *fixed[i]);
    } else {
      p.set(s, rng.uniform(ranges[i].lo, ranges[i].hi));
    }
  }
  return p;
}

Expr RandomRealizations::base_function(UnknownName name, std::uint8_t args) {
  const auto key = std::make_pair(static_cast<int>(name), static_cast<int>(args));
  if (auto it = bases_.find(key); it != bases_.end()) return it->second;
  Rng rng(seed_ ^ (0x5bd1e995ULL * (static_cast<std::uint64_t>(name) + 1)) ^
          (static_cast<std::uint64_t>(args) << 32));
  auto coefficient = [&rng](long lo, long hi) { return Expr(Rational(rng.integer(lo, hi), 8)); };
  // f = c0 + sum_i a_i sin(b_i x_i + c_i) + d cos(sum_i e_i x_i + g)
  std::vector<Expr> terms{coefficient(-8, 8)};
  std::vector<Expr> mixed{coefficient(-8, 8)};
  for (std::size_t i = 0; i < 5; ++i) {
    if (!((args >> i) & 1U)) continue;
    const Expr x(kPointVariables[i]);
    terms.push_back(coefficient(2, 12) * sin(coefficient(3, 14) * x + coefficient(-8, 8)));
    mixed.push_back(coefficient(2, 10) * x);
  }
  terms.push_back(coefficient(2, 10) * cos(Expr::add(std::move(mixed))));
  Expr f = Expr::add(std::move(terms));
  bases_.emplace(key, f);
  return f;
}

double RandomRealizations::evaluate(const UnknownFunction& f, const Point& point) {
  const auto key = std::make_pair(std::make_pair(static_cast<int>(f.name), static_cast<int>(f.args)),
                                  f.derivs);
  auto it = derivatives_.find(key);
  if (it == derivatives_.end()) {
    Expr d = base_function(f.name, f.args);
    for (std::size_t i = 0; i < 5; ++i) {
      for (int k = 0; k < f.derivs[i]; ++k) d = differentiate(d, kPointVariables[i]);
    }
    it = derivatives_.emplace(key, d).first;
  }
  return eval_numeric(it->second, point);
}

UnknownResolver RandomRealizations::resolver() {
  return [this](const UnknownFunction& f, const Point& p) { return evaluate(f, p); };
}

}  // namespace noether::sym
