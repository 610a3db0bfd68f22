#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "noether/catalog/catalog.hpp"
#include "noether/numeric/geodesic.hpp"
#include "noether/symbolic/sampling.hpp"

using namespace noether;
using namespace noether::numeric;

namespace {

const char* kSchwarzschild = "name = schwarzschild\nnu = ln(1 - alpha/r)\nmu = -ln(1 - alpha/r)\nlambda = r2\nparams.alpha = 1\ndomain = (1.5, 10)\n";
const char* kDeSitter = "name = de-sitter\nnu = ln(1 - r^2/b^2)\nmu = -ln(1 - r^2/b^2)\nlambda = r2\nparams.b = 2\ndomain = (0, 2)\n";
const char* kII2 = "nu = 0\nmu = r/3\nlambda = r2\ndomain = (0.2, 5)\n";

symmetry::FirstIntegral integral(const spacetime::Metric& m, const char* gen) {
  return symmetry::first_integral(m, symmetry::parse_generator(gen, "G"));
}

double drift(const spacetime::Metric& m, const State& init, const char* gen, double tol, double length = 10.0) {
  const spacetime::GeodesicSystem sys(m);
  const auto tr = integrate_geodesic(sys, init, length, tol);
  return conservation_drift(sys, tr, integral(m, gen)).relative_drift;
}

const State kEquatorial{0.0, 4.0, std::numbers::pi / 2, 0.0, 1.2, 0.1, 0.0, 0.05};

}  // namespace

TEST_CASE("flat radial geodesic is a straight line") {
  const auto tr = integrate_geodesic(spacetime::flat_metric(), {0, 2, std::numbers::pi / 2, 0, 1, 0.3, 0, 0}, 5.0, 1e-10);
  REQUIRE(tr.s.size() >= 201);
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.s.size(); ++i) {
    worst = std::max(worst, std::fabs(tr.states[i][1] - (2 + 0.3 * tr.s[i])));
    worst = std::max(worst, std::fabs(tr.states[i][0] - tr.s[i]));
  }
  CHECK(worst < 1e-8);
  for (std::size_t i = 1; i < tr.s.size(); ++i) CHECK(tr.s[i] > tr.s[i - 1]);
  CHECK(tr.stats.steps > 0);
}

TEST_CASE("flat energy is conserved") {
  CHECK(drift(spacetime::flat_metric(), {0, 2, 1.0, 0.3, 1, 0.3, 0.1, -0.2}, "eta0 = 1\n", 1e-10) < 1e-8);
}

TEST_CASE("Schwarzschild conserves angular momentum and the Lagrangian") {
  const auto m = spacetime::parse_metric(kSchwarzschild);
  CHECK(drift(m, kEquatorial, "eta3 = 1\n", 1e-10) < 1e-6);
  CHECK(drift(m, kEquatorial, "xi = 1\n", 1e-10) < 1e-6);
  CHECK(drift(m, kEquatorial, "eta0 = 1\n", 1e-10) < 1e-6);
}

TEST_CASE("gauge integral 2(t - s td) is conserved") {
  const auto m = spacetime::parse_metric(kII2);
  CHECK(drift(m, {0.5, 1.0, 1.2, 0.4, 0.8, -0.3, 0.2, 0.1}, "eta0 = s\ngauge = 2*t\n", 1e-10) < 1e-6);
}

TEST_CASE("de Sitter geodesic heading to the horizon exits the domain") {
  const auto m = spacetime::parse_metric(kDeSitter);
  bool exited = false;
  try {
    (void)integrate_geodesic(m, {0, 1.9, std::numbers::pi / 2, 0, 1, 1, 0, 0}, 10.0, 1e-10);
  } catch (const DomainExitError& e) {
    exited = true;
    CHECK(e.last_valid_s() > 0.0);
    CHECK(e.last_valid_s() < 10.0);
  }
  CHECK(exited);
  // outward start outside the domain
  CHECK_THROWS_AS((void)integrate_geodesic(m, {0, 2.5, 1.0, 0, 1, 0, 0, 0}, 1.0, 1e-10), DomainExitError);
}

TEST_CASE("integrator preconditions") {
  const auto flat = spacetime::flat_metric();
  const State init{0, 2, 1.0, 0, 1, 0, 0, 0};
  CHECK_THROWS_AS((void)integrate_geodesic(flat, init, 1.0, 1e-5), std::invalid_argument);
  CHECK_THROWS_AS((void)integrate_geodesic(flat, init, 1.0, 1e-14), std::invalid_argument);
  CHECK_THROWS_AS((void)integrate_geodesic(flat, init, 1.0, 1e-10, 50), std::invalid_argument);
  CHECK(integrate_geodesic(flat, init, 1.0, 1e-10, 500).s.size() == 501);
}

TEST_CASE("time reversal returns to the initial state") {
  const auto m = spacetime::parse_metric(kSchwarzschild);
  const double tol = 1e-10, length = 10.0;
  const auto fwd = integrate_geodesic(m, kEquatorial, length, tol);
  const auto back = integrate_geodesic(m, fwd.states.back(), -length, tol);
  CHECK(back.s.back() == doctest::Approx(-length));
  for (std::size_t i = 0; i < 8; ++i) CHECK(std::fabs(back.states.back()[i] - kEquatorial[i]) <= 10 * tol * length);
}

TEST_CASE("halving the tolerance reduces drift on every catalog metric") {
  int compared = 0;
  for (const auto& e : catalog::load_catalog()) {
    const auto m = e.metric.concrete();
    const spacetime::GeodesicSystem sys(m);
    sym::Rng rng(7);
    // velocities scaled down until the path stays in the domain
    const State init = integrate_within_domain(sys, random_initial_state(m, rng), 2.0, 1e-10).states.front();
    const auto fi = symmetry::first_integral(m, *e.find("Y0"));
    double coarse = 0.0, fine = 0.0;
    try {
      coarse = conservation_drift(sys, integrate_geodesic(sys, init, 2.0, 1e-6), fi).max_abs_change;
      fine = conservation_drift(sys, integrate_geodesic(sys, init, 2.0, 5e-7), fi).max_abs_change;
    } catch (const DomainExitError&) {
      continue;
    } catch (const StepSizeError&) {
      continue;
    }
    ++compared;
    CHECK_MESSAGE(fine <= coarse, e.label());
  }
  CHECK(compared == 19);
}

TEST_CASE("trajectory export") {
  const auto tr = integrate_geodesic(spacetime::flat_metric(), {0, 2, 1.0, 0, 1, 0.3, 0, 0}, 1.0, 1e-10);
  const std::string text = export_trajectory(tr, 42);
  CHECK(text.rfind("# metric: flat\n# seed: 42\n", 0) == 0);
  CHECK(text.find("s\tt\tr\ttheta\tphi\ttd\trd\tthetad\tphid\n") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5 + 201);
}

TEST_CASE("random initial states respect the standoff window") {
  const auto m = spacetime::parse_metric(kSchwarzschild);
  sym::Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const State y = random_initial_state(m, rng);
    CHECK(y[1] >= 1.5 + 0.05 * 8.5 - 1e-12);
    CHECK(y[1] <= 10 - 0.05 * 8.5 + 1e-12);
    CHECK(y[2] >= 0.3);
    CHECK(y[2] <= std::numbers::pi - 0.3);
    for (int k = 4; k < 8; ++k) CHECK(std::fabs(y[k]) <= 1.0);
  }
}
