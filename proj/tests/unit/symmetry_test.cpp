#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "noether/catalog/catalog.hpp"
#include "noether/catalog/determining.hpp"
#include "noether/spacetime/metric.hpp"
#include "noether/symbolic/parser.hpp"
#include "noether/symmetry/algebra.hpp"
#include "noether/symmetry/noether.hpp"

using namespace noether;
using namespace noether::symmetry;
using sym::parse;

namespace {

bool same(const Expr& a, const Expr& b, const sym::SampleDomain& d = sym::SampleDomain::standard()) {
  return sym::is_zero(a - b, d).accepted_zero();
}

Generator gen(const char* text) { return parse_generator(text, "G"); }

const char* kSchwarzschild = "nu = ln(1 - alpha/r)\nmu = -ln(1 - alpha/r)\nlambda = r2\nparams.alpha = 1\ndomain = (1.5, 10)\n";
const char* kFlatTimeMu = "nu = 0\nmu = r/3\nlambda = r2\ndomain = (0.2, 5)\n";

const char* kX1 = "name = X1\neta3 = 1\n";
const char* kX2 = "name = X2\neta2 = cos(phi)\neta3 = -cot(theta)*sin(phi)\n";
const char* kX3 = "name = X3\neta2 = sin(phi)\neta3 = cot(theta)*cos(phi)\n";

}  // namespace

TEST_CASE("total derivative and prolongation") {
  CHECK(same(total_derivative(parse("2*t")), parse("2*td")));
  CHECK(same(total_derivative(parse("s*r^2")), parse("r^2 + 2*s*r*rd")));
  // Y = s d_s + (r/2) d_r: eta^1_{,s} = rd/2 - rd
  const auto pr = prolong(gen("xi = s\neta1 = r/2\n"));
  CHECK(same(pr[1], parse("-rd/2")));
  CHECK(same(pr[0], parse("-td")));
}

TEST_CASE("Noether residual decides symmetries") {
  const Metric flat_mu = spacetime::parse_metric(kFlatTimeMu, "flat-t");
  // s d_t with gauge 2t
  const auto ok = verify_symmetry(flat_mu, gen("eta0 = s\ngauge = 2*t\n"));
  CHECK(ok.verified());
  const auto wrong_gauge = verify_symmetry(flat_mu, gen("eta0 = s\ngauge = t\n"));
  CHECK_FALSE(wrong_gauge.verified());

  const Metric schw = spacetime::parse_metric(kSchwarzschild, "schw");
  const auto radial = verify_symmetry(schw, gen("eta1 = r\n"));
  CHECK(radial.status() == "nonzero");
  REQUIRE(radial.decision.witness.has_value());
  CHECK(std::fabs(radial.decision.witness_value) >= 1e-6);
  CHECK(verify_symmetry(schw, gen(kX2)).verified());
}

TEST_CASE("residual zero iff the determining system is satisfied") {
  const Metric schw = spacetime::parse_metric(kSchwarzschild, "schw");
  const auto ds = determining_system(spacetime::LambdaBranch::radius_squared);
  for (const char* text : {kX1, kX2, kX3, "eta0 = 1\n", "xi = 1\n", "eta1 = r\n", "eta0 = t\n", "eta0 = s\ngauge = 2*t\n"}) {
    const Generator g = gen(text);
    const bool residual_zero = verify_symmetry(schw, g).verified();
    bool system_zero = true;
    for (const auto& [mono, d] : substitute_into_system(ds, g, schw)) system_zero = system_zero && d.accepted_zero();
    CHECK_MESSAGE(residual_zero == system_zero, text);
  }
}

TEST_CASE("so(3) brackets") {
  const Generator x1 = gen(kX1), x2 = gen(kX2), x3 = gen(kX3);
  const Generator b13 = lie_bracket(x1, x3);
  for (std::size_t i = 0; i < 5; ++i) CHECK(same(b13.components()[i], x2.components()[i]));
  const Generator b23 = lie_bracket(x2, x3);
  for (std::size_t i = 0; i < 5; ++i) CHECK(same(b23.components()[i], -x1.components()[i]));
  const auto table = commutator_table({x1, x2, x3});
  CHECK(table.bracket(0, 2)[1] == 1);
  CHECK(table.bracket(1, 2)[0] == -1);
  CHECK(table.bracket(0, 1)[2] == -1);  // [X1, X2] = -X3
  CHECK(table.bracket(2, 0)[1] == -1);  // antisymmetry
  CHECK(table.jacobi_residual < 1e-9);
}

TEST_CASE("bracket of symmetries with gauges is a symmetry") {
  const Metric flat = spacetime::flat_metric();
  const Generator gt = gen("eta0 = s\ngauge = 2*t\n");
  const Generator y2 = gen("xi = s^2/2\neta0 = s*t/2\neta1 = s*r/2\ngauge = (t^2 - r^2)/2\n");
  REQUIRE(verify_symmetry(flat, gt).verified());
  REQUIRE(verify_symmetry(flat, y2).verified());
  Generator b = lie_bracket(gt, y2);
  b.gauge = bracket_gauge(gt, y2);
  CHECK(verify_symmetry(flat, b).verified());
}

TEST_CASE("first integrals") {
  const Metric schw = spacetime::parse_metric(kSchwarzschild, "schw");
  const auto d = schw.sample_domain();
  CHECK(same(first_integral(schw, gen("eta0 = 1\n")).expr, parse("-2*(1 - 1/r)*td"), d));
  CHECK(same(first_integral(schw, gen(kX1)).expr, parse("2*r^2*sin(theta)^2*phid"), d));
  CHECK(same(first_integral(schw, gen("xi = 1\n")).expr, spacetime::lagrangian(schw), d));
  const Metric flat_mu = spacetime::parse_metric(kFlatTimeMu, "flat-t");
  CHECK(same(first_integral(flat_mu, gen("eta0 = s\ngauge = 2*t\n")).expr, parse("2*(t - s*td)"),
             flat_mu.sample_domain()));
  CHECK_FALSE(first_integral(schw, gen("eta1 = r\n")).note.empty());
}

TEST_CASE("Killing vectors") {
  const Metric schw = spacetime::parse_metric(kSchwarzschild, "schw");
  CHECK(killing_check(schw, gen("eta0 = 1\n")).killing);
  CHECK(killing_check(schw, gen(kX3)).killing);
  const auto radial = killing_check(schw, gen("eta1 = r\n"));
  CHECK_FALSE(radial.killing);
  CHECK(radial.witness.has_value());
  CHECK_THROWS_AS((void)killing_check(schw, gen("xi = 1\n")), std::invalid_argument);
}

TEST_CASE("determining system has nineteen equations and matches the printed list") {
  const auto ds = determining_system(spacetime::LambdaBranch::radius_squared);
  CHECK(ds.nonredundant.size() == 19);
  const auto printed = catalog::load_printed_system(catalog::default_catalog_dir(), spacetime::LambdaBranch::radius_squared);
  REQUIRE(printed.size() == 19);
  const auto cmp = catalog::compare_printed_system(ds, printed);
  CHECK(cmp.all_matched());
  int corrected = 0;
  for (const auto& m : cmp.matches) corrected += m.corrected;
  CHECK(corrected == 3);  // the A_r, A_theta, A_phi slots
  CHECK(cmp.discrepancies().size() == 5);
  // 19 latex lines, one per equation
  const std::string latex = ds.to_latex();
  CHECK(std::count(latex.begin(), latex.end(), '\n') >= 19);
}

TEST_CASE("shorthand expansion") {
  CHECK(catalog::expand_shorthand("xi_s - 2*eta1/r") == "diff(xi(s,t,r,theta,phi), s) - 2*eta1(s,t,r,theta,phi)/r");
  CHECK(catalog::expand_shorthand("A_theta") == "diff(A(s,t,r,theta,phi), theta)");
}
