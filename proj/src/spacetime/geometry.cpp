#include "noether/spacetime/geometry.hpp"

#include <cmath>

#include "noether/symbolic/calculus.hpp"
#include "noether/symbolic/evaluate.hpp"

namespace noether::spacetime {

namespace {

Expr d(const Expr& e, int coordinate) { return sym::differentiate(e, sym::kCoordinates[coordinate]); }

}  // namespace

Christoffel christoffel(const Metric& m) {
  const auto g = m.diagonal();
  Christoffel out;
  for (int a = 0; a < 4; ++a) {
    const Expr inv = sym::simplify(Expr(1L) / g[a]);
    for (int b = 0; b < 4; ++b) {
      for (int c = b; c < 4; ++c) {
        // Diagonal metric: G^a_bc = g^aa (d_b g_ac + d_c g_ab - d_a g_bc) / 2
        Expr sum = Expr(0L);
        if (a == c) sum = sum + d(g[a], b);
        if (a == b) sum = sum + d(g[a], c);
        if (b == c) sum = sum - d(g[b], a);
        const Expr gamma = sym::simplify(Expr(sym::Rational(1, 2)) * inv * sum);
        out[a][b][c] = gamma;
        out[a][c][b] = gamma;
      }
    }
  }
  return out;
}

CurvatureReport curvature(const Metric& m) {
  const auto g = m.diagonal();
  const Christoffel gamma = christoffel(m);
  CurvatureReport out;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        out.riemann_up[a][b][c][c] = Expr(0L);
        for (int dd = c + 1; dd < 4; ++dd) {
          Expr sum = d(gamma[a][b][dd], c) - d(gamma[a][b][c], dd);
          for (int e = 0; e < 4; ++e) {
            sum = sum + gamma[a][c][e] * gamma[e][b][dd] - gamma[a][dd][e] * gamma[e][b][c];
          }
          const Expr value = sym::simplify(sum);
          out.riemann_up[a][b][c][dd] = value;
          out.riemann_up[a][b][dd][c] = sym::simplify(-value);
        }
      }
    }
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        for (int dd = 0; dd < 4; ++dd) {
          out.riemann[a][b][c][dd] = sym::simplify(g[a] * out.riemann_up[a][b][c][dd]);
        }
      }
    }
  }
  Expr scalar = Expr(0L);
  for (int b = 0; b < 4; ++b) {
    for (int dd = b; dd < 4; ++dd) {
      Expr sum = Expr(0L);
      for (int a = 0; a < 4; ++a) sum = sum + out.riemann_up[a][b][a][dd];
      const Expr value = sym::simplify(sum);
      if (!value.is_zero_node()) out.ricci.emplace(std::make_pair(b, dd), value);
      if (b == dd) scalar = scalar + value / g[b];
    }
  }
  out.ricci_scalar = sym::simplify(scalar);
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        for (int dd = c + 1; dd < 4; ++dd) {
          if (std::make_pair(a, b) > std::make_pair(c, dd)) continue;
          const Expr& v = out.riemann[a][b][c][dd];
          if (!v.is_zero_node()) out.riemann_independent.emplace(std::array<int, 4>{a, b, c, dd}, v);
        }
      }
    }
  }
  return out;
}

RiemannSymmetryCheck check_riemann_symmetries(const Metric& m, const CurvatureReport& c, int samples,
                                              std::uint64_t seed) {
  RiemannSymmetryCheck out;
  const auto domain = m.sample_domain();
  sym::Rng rng(seed);
  sym::RandomRealizations realizations(seed);
  const auto resolver = realizations.resolver();
  for (int draw = 0; draw < samples * 10 && out.samples < samples; ++draw) {
    const sym::Point p = domain.draw(rng);
    double R[4][4][4][4];
    try {
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          for (int cc = 0; cc < 4; ++cc)
            for (int dd = 0; dd < 4; ++dd) R[a][b][cc][dd] = sym::eval_numeric(c.riemann[a][b][cc][dd], p, resolver);
    } catch (const sym::EvalError&) {
      continue;
    }
    ++out.samples;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        for (int cc = 0; cc < 4; ++cc) {
          for (int dd = 0; dd < 4; ++dd) {
            const double v = R[a][b][cc][dd];
            const double scale = std::max(1.0, std::fabs(v));
            const double res = std::max({std::fabs(v + R[b][a][cc][dd]), std::fabs(v + R[a][b][dd][cc]),
                                         std::fabs(v - R[cc][dd][a][b]),
                                         std::fabs(v + R[a][cc][dd][b] + R[a][dd][b][cc])}) /
                               scale;
            out.max_residual = std::max(out.max_residual, res);
          }
        }
      }
    }
  }
  out.ok = out.samples > 0 && out.max_residual < sym::kZeroTolerance;
  return out;
}

std::vector<std::pair<std::pair<int, int>, Expr>> killing_equations(const Metric& m,
                                                                     const std::array<Expr, 4>& v) {
  const auto g = m.diagonal();
  std::vector<std::pair<std::pair<int, int>, Expr>> out;
  for (int a = 0; a < 4; ++a) {
    for (int b = a; b < 4; ++b) {
      // (L_v g)_ab = v^c d_c g_ab + g_cb d_a v^c + g_ac d_b v^c, diagonal g.
      Expr sum = Expr(0L);
      if (a == b) {
        for (int c = 0; c < 4; ++c) sum = sum + v[c] * d(g[a], c);
      }
      sum = sum + g[b] * d(v[b], a) + g[a] * d(v[a], b);
      out.emplace_back(std::make_pair(a, b), sum);
    }
  }
  return out;
}

GeodesicSystem::GeodesicSystem(const Metric& m) : metric_(m.concrete()), params_(metric_.parameter_point()) {
  if (metric_.has_arbitrary_profile()) {
    throw std::invalid_argument("metric '" + m.name + "' has an arbitrary profile without a stand-in");
  }
  const Christoffel gamma = christoffel(metric_);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = b; c < 4; ++c) {
        if (!gamma[a][b][c].is_zero_node()) terms_.emplace_back(a, b, c, gamma[a][b][c]);
      }
    }
  }
}

sym::Point GeodesicSystem::point(const State& y, double s) const {
  sym::Point p = params_;
  p.set(Symbol::s, s);
  for (int i = 0; i < 4; ++i) {
    p.set(sym::kCoordinates[i], y[i]);
    p.set(sym::kVelocities[i], y[4 + i]);
  }
  return p;
}

bool GeodesicSystem::in_domain(const State& y) const {
  for (double v : y) {
    if (!std::isfinite(v)) return false;
  }
  if (!(y[1] > metric_.domain.lo && y[1] < metric_.domain.hi)) return false;
  return std::fabs(std::sin(y[2])) >= 1e-6;
}

GeodesicSystem::State GeodesicSystem::rhs(const State& y) const {
  if (!in_domain(y)) throw GeodesicDomainError("state outside the metric domain (r = " + std::to_string(y[1]) + ")");
  const sym::Point p = point(y);
  State out{};
  for (int i = 0; i < 4; ++i) out[i] = y[4 + i];
  for (const auto& [a, b, c, expr] : terms_) {
    const double g = sym::eval_numeric(expr, p);
    const double w = b == c ? y[4 + b] * y[4 + c] : 2.0 * y[4 + b] * y[4 + c];
    out[4 + a] -= g * w;
  }
  return out;
}

GeodesicSystem::State geodesic_rhs(const Metric& m, const GeodesicSystem::State& y) {
  return GeodesicSystem(m).rhs(y);
}

}  // namespace noether::spacetime
