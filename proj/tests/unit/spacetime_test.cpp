#include "doctest.h"

#include <cmath>
#include <numbers>

#include "../support/curvature_oracle.hpp"
#include "noether/spacetime/geometry.hpp"
#include "noether/spacetime/metric.hpp"
#include "noether/symbolic/evaluate.hpp"
#include "noether/symbolic/parser.hpp"

using namespace noether;
using namespace noether::spacetime;
using sym::parse;

namespace {

Metric metric_from(const std::string& text) { return parse_metric(text, "test"); }

const char* kSchwarzschild = R"(
nu = ln(1 - alpha/r)
mu = -ln(1 - alpha/r)
lambda = r2
params.alpha = 1
domain = (1.5, 10)
)";

const char* kDeSitter = R"(
nu = ln(1 - r^2/b^2)
mu = -ln(1 - r^2/b^2)
lambda = r2
params.b = 2
domain = (0.2, 1.9)
)";

double value_at(const Expr& e, const sym::Point& p) { return sym::eval_numeric(e, p); }

sym::Point at(double t, double r, double theta, double phi, const Metric& m) {
  sym::Point p = m.parameter_point();
  p.set(Symbol::t, t).set(Symbol::r, r).set(Symbol::theta, theta).set(Symbol::phi, phi);
  return p;
}

}  // namespace

TEST_CASE("metric file parsing") {
  const Metric m = metric_from(kSchwarzschild);
  CHECK(m.lambda == LambdaBranch::radius_squared);
  CHECK(m.params.at(Symbol::alpha) == 1.0);
  CHECK(m.domain.lo == 1.5);
  CHECK(check_metric(m).ok);

  try {
    (void)metric_from("nu = 0\nmu = 0\nlambda = r3\ndomain = (0, 1)\n");
    FAIL("expected a parse error");
  } catch (const MetricParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS((void)metric_from("nu = t\nmu = 0\nlambda = r2\ndomain = (0, 1)\n"), MetricParseError);
  CHECK_THROWS_AS((void)metric_from("nu = 0\nlambda = r2\ndomain = (0, 1)\n"), MetricParseError);
  // Round trip through the writer.
  const Metric again = parse_metric(format_metric(m));
  CHECK(again.nu == m.nu);
  CHECK(again.domain.hi == m.domain.hi);
}

TEST_CASE("wrong signature inside the domain is detected") {
  const Metric m = metric_from("nu = ln(1 - alpha/r)\nmu = 0\nlambda = r2\nparams.alpha = 1\ndomain = (0.1, 3)\n");
  CHECK_FALSE(check_metric(m).ok);
}

TEST_CASE("lagrangian pieces of the metric") {
  const Metric m = metric_from(kSchwarzschild);
  const auto g = m.diagonal();
  CHECK(sym::is_zero(g[0] - parse("1 - alpha/r")).status == sym::ZeroStatus::zero);
  CHECK(sym::is_zero(g[1] + parse("(1 - alpha/r)^-1")).status == sym::ZeroStatus::zero);
  CHECK(sym::is_zero(g[3] + parse("r^2*sin(theta)^2")).status == sym::ZeroStatus::zero);
}

TEST_CASE("christoffel symbols of flat space in spherical coordinates") {
  const auto gamma = christoffel(flat_metric());
  CHECK(gamma[1][2][2] == sym::simplify(parse("-r")));
  CHECK(gamma[2][1][2] == sym::simplify(parse("1/r")));
  CHECK(gamma[2][2][1] == gamma[2][1][2]);
  CHECK(gamma[0][0][1].is_zero_node());
  // Generic profile: Gamma^t_tr = nu'/2.
  const auto generic = christoffel(symbolic_family(LambdaBranch::radius_squared));
  CHECK(sym::is_zero(generic[0][0][1] - parse("diff(nu(r), r)/2")).status == sym::ZeroStatus::zero);
}

TEST_CASE("finite-difference oracle: Schwarzschild is Ricci flat") {
  const double alpha = 1.0;
  oracle::DiagonalMetric g = [alpha](const oracle::Coords& x) {
    const double f = 1.0 - alpha / x[1];
    const double s = std::sin(x[2]);
    return oracle::Coords{f, -1.0 / f, -x[1] * x[1], -x[1] * x[1] * s * s};
  };
  sym::Rng rng(42);
  for (int i = 0; i < 20; ++i) {
    const oracle::Coords x{rng.uniform(-1, 1), rng.uniform(1.8, 9.6), rng.uniform(0.3, 2.8),
                           rng.uniform(0, 6.28)};
    const auto c = oracle::curvature(g, x);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) CHECK(std::fabs(c.ricci[a][b]) < 1e-5);
  }
  const auto report = curvature(metric_from(kSchwarzschild));
  CHECK(report.ricci.empty());
  CHECK(report.ricci_scalar.is_zero_node());
  CHECK_FALSE(report.riemann_independent.empty());
}

TEST_CASE("symbolic curvature agrees with the oracle on de Sitter") {
  const Metric m = metric_from(kDeSitter);
  const double b = 2.0;
  oracle::DiagonalMetric g = [b](const oracle::Coords& x) {
    const double f = 1.0 - x[1] * x[1] / (b * b);
    const double s = std::sin(x[2]);
    return oracle::Coords{f, -1.0 / f, -x[1] * x[1], -x[1] * x[1] * s * s};
  };
  const auto report = curvature(m);
  sym::Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const oracle::Coords x{rng.uniform(-1, 1), rng.uniform(0.3, 1.8), rng.uniform(0.3, 2.8),
                           rng.uniform(0, 6.28)};
    const auto c = oracle::curvature(g, x);
    CHECK(std::fabs(std::fabs(c.scalar) - 12.0 / (b * b)) < 1e-4);
    const sym::Point p = at(x[0], x[1], x[2], x[3], m);
    CHECK(value_at(report.ricci_scalar, p) == doctest::Approx(c.scalar).epsilon(1e-4));
    for (int a = 0; a < 4; ++a) {
      for (int bb = 0; bb < 4; ++bb) {
        for (int cc = 0; cc < 4; ++cc) {
          for (int dd = 0; dd < 4; ++dd) {
            CHECK(value_at(report.riemann_up[a][bb][cc][dd], p) ==
                  doctest::Approx(c.riemann_up[a][bb][cc][dd]).epsilon(1e-4).scale(1.0));
          }
        }
      }
    }
  }
  CHECK(sym::is_zero(report.ricci_scalar + parse("12/b^2")).status == sym::ZeroStatus::zero);
  CHECK(check_riemann_symmetries(m, report).ok);
}

TEST_CASE("killing equations") {
  const Metric m = metric_from(kSchwarzschild);
  const Expr zero(0L);
  for (const auto& [ab, e] : killing_equations(m, {Expr(1L), zero, zero, zero})) {
    CHECK(sym::is_zero(e).status == sym::ZeroStatus::zero);
  }
  bool any_nonzero = false;
  for (const auto& [ab, e] : killing_equations(m, {zero, Expr(Symbol::r), zero, zero})) {
    if (sym::is_zero(e, m.sample_domain()).status == sym::ZeroStatus::nonzero) any_nonzero = true;
  }
  CHECK(any_nonzero);
}

TEST_CASE("geodesic right-hand side") {
  const double half_pi = std::numbers::pi / 2;
  // Flat, radial: no acceleration.
  auto y = geodesic_rhs(flat_metric(), {0, 2, half_pi, 0, 1, 0.3, 0, 0});
  CHECK(y[5] == doctest::Approx(0.0));
  CHECK(y[1] == doctest::Approx(0.3));
  // Zero velocity: no acceleration anywhere.
  y = geodesic_rhs(metric_from(kSchwarzschild), {0, 3, 1.0, 0.5, 0, 0, 0, 0});
  for (int i = 4; i < 8; ++i) CHECK(y[i] == doctest::Approx(0.0));
  // Circular data: r'' = -Gamma^r_phph phid^2 = r sin^2 theta phid^2 = 1.
  y = geodesic_rhs(flat_metric(), {0, 1, half_pi, 0, 0, 0, 0, 1});
  CHECK(y[5] == doctest::Approx(1.0));
  // Outside the domain.
  CHECK_THROWS_AS((void)geodesic_rhs(metric_from(kDeSitter), {0, 1.95, 1.0, 0, 1, 0, 0, 0}),
                  GeodesicDomainError);
}
