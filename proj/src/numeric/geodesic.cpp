#include "noether/numeric/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "noether/symbolic/evaluate.hpp"

namespace noether::numeric {

namespace {

// Dormand-Prince coefficients.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b* (fifth minus fourth order weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (const auto& [w, k] : terms) {
    for (std::size_t i = 0; i < 8; ++i) out[i] += h * w * (*k)[i];
  }
  return out;
}

}  // namespace

GeodesicTrajectory integrate_geodesic(const spacetime::GeodesicSystem& system, const State& init, double length,
                                      double tol, int points) {
  if (!(tol >= 1e-13 && tol <= 1e-6)) throw std::invalid_argument("integrate_geodesic: tol must lie in [1e-13, 1e-6]");
  if (points < kMinOutputPoints) throw std::invalid_argument("integrate_geodesic: at least 200 output points");
  if (!system.in_domain(init)) throw DomainExitError("initial state outside the metric domain", 0.0);

  GeodesicTrajectory tr;
  tr.metric = system.metric().name;
  tr.stats.tol = tol;
  tr.s.push_back(0.0);
  tr.states.push_back(init);

  const double direction = length < 0 ? -1.0 : 1.0;
  const double span = std::fabs(length);
  State y = init;
  double s = 0.0;
  double h = std::min(1e-2, span / points);
  State k1 = system.rhs(y);
  for (int out = 1; out <= points; ++out) {
    const double target = span * out / points;
    while (s < target) {
      if (h < 1e-14 * std::max(1.0, span)) {
        throw StepSizeError("integrate_geodesic: step size underflow at s = " + std::to_string(direction * s));
      }
      const bool last = s + h >= target;
      const double step = last ? target - s : h;
      const double hs = direction * step;
      State k2, k3, k4, k5, k6, k7, y5;
      try {
        k2 = system.rhs(axpy(y, hs, {{a21, &k1}}));
        k3 = system.rhs(axpy(y, hs, {{a31, &k1}, {a32, &k2}}));
        k4 = system.rhs(axpy(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        k5 = system.rhs(axpy(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        k6 = system.rhs(axpy(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        y5 = axpy(y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        k7 = system.rhs(y5);
      } catch (const spacetime::GeodesicDomainError&) {
        // A stage left the domain: retry smaller, unless the step is tiny.
        ++tr.stats.rejected;
        if (step < 1e-9) throw DomainExitError("geodesic left the metric domain", direction * s);
        h = step * 0.25;
        continue;
      } catch (const sym::EvalError&) {
        ++tr.stats.rejected;
        if (step < 1e-9) throw DomainExitError("geodesic hit a singularity", direction * s);
        h = step * 0.25;
        continue;
      }
      double err = 0.0;
      for (std::size_t i = 0; i < 8; ++i) {
        const double e =
            hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        err = std::max(err, std::fabs(e) / (tol * std::max(1.0, std::fabs(y[i]))));
      }
      if (!std::isfinite(err)) err = 1e10;
      const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      if (err <= 1.0) {
        ++tr.stats.steps;
        s = last ? target : s + step;
        y = y5;
        k1 = k7;
        if (!last || factor < 1.0) h = step * factor;
      } else {
        ++tr.stats.rejected;
        h = step * factor;
      }
    }
    tr.s.push_back(direction * target);
    tr.states.push_back(y);
  }
  return tr;
}

GeodesicTrajectory integrate_geodesic(const spacetime::Metric& m, const State& init, double length, double tol,
                                      int points) {
  return integrate_geodesic(spacetime::GeodesicSystem(m), init, length, tol, points);
}

DriftReport conservation_drift(const spacetime::GeodesicSystem& system, const GeodesicTrajectory& tr,
                               const symmetry::FirstIntegral& fi) {
  DriftReport out;
  out.integral = fi.source;
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    const double v = sym::eval_numeric(fi.expr, system.point(tr.states[i], tr.s[i]));
    if (i == 0) out.initial = v;
    out.max_abs_change = std::max(out.max_abs_change, std::fabs(v - out.initial));
  }
  out.samples = tr.states.size();
  out.relative_drift = out.max_abs_change / std::max(1.0, std::fabs(out.initial));
  return out;
}

std::string export_trajectory(const GeodesicTrajectory& tr, std::uint64_t seed) {
  std::ostringstream os;
  os << "# metric: " << tr.metric << "\n# seed: " << seed << "\n# tol: " << tr.stats.tol
     << "\n# steps: " << tr.stats.steps << " rejected: " << tr.stats.rejected << "\n";
  os << "s\tt\tr\ttheta\tphi\ttd\trd\tthetad\tphid\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < tr.s.size(); ++i) {
    os << tr.s[i];
    for (double v : tr.states[i]) os << "\t" << v;
    os << "\n";
  }
  return os.str();
}

State random_initial_state(const spacetime::Metric& m, sym::Rng& rng) {
  const auto domain = m.sample_domain();
  const sym::Point p = domain.draw(rng);
  State y{};
  for (int i = 0; i < 4; ++i) {
    y[i] = *p.get(sym::kCoordinates[i]);
    y[4 + i] = *p.get(sym::kVelocities[i]);
  }
  return y;
}

GeodesicTrajectory integrate_within_domain(const spacetime::GeodesicSystem& system, State init, double length,
                                           double tol, int attempts) {
  for (int k = 0;; ++k) {
    try {
      return integrate_geodesic(system, init, length, tol);
    } catch (const DomainExitError&) {
      if (k + 1 >= attempts) throw;
    } catch (const StepSizeError&) {
      if (k + 1 >= attempts) throw;
    }
    for (int i = 4; i < 8; ++i) init[i] *= 0.5;
  }
}

}  // namespace noether::numeric
