#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <vector>

#include "noether/spacetime/metric.hpp"
#include "noether/symbolic/simplify.hpp"

namespace noether::spacetime {

// Index order 0..3 = (t, r, theta, phi).
using Christoffel = std::array<std::array<std::array<Expr, 4>, 4>, 4>;  // [a][b][c] = Gamma^a_{bc}
using Rank4 = std::array<std::array<std::array<std::array<Expr, 4>, 4>, 4>, 4>;

[[nodiscard]] Christoffel christoffel(const Metric& m);

// R^a_{bcd} = d_c G^a_{bd} - d_d G^a_{bc} + G^a_{ce} G^e_{bd} - G^a_{de} G^e_{bc},
// R_{bd} = R^a_{bad}, R = g^{bd} R_{bd}.
struct CurvatureReport {
  Rank4 riemann_up;                                // R^a_{bcd}
  Rank4 riemann;                                   // R_{abcd} = g_{ae} R^e_{bcd}
  std::map<std::pair<int, int>, Expr> ricci;       // nonzero R_{bd}, b <= d
  std::map<std::array<int, 4>, Expr> riemann_independent;  // nonzero R_{abcd}, a<b, c<d, (a,b)<=(c,d)
  Expr ricci_scalar;
};

[[nodiscard]] CurvatureReport curvature(const Metric& m);

struct RiemannSymmetryCheck {
  bool ok = true;
  double max_residual = 0.0;
  int samples = 0;
};

// R_abcd = -R_bacd = -R_abdc = R_cdab and the first Bianchi identity,
// evaluated at `samples` seeded points of the metric's domain.
[[nodiscard]] RiemannSymmetryCheck check_riemann_symmetries(const Metric& m, const CurvatureReport& c,
                                                            int samples = 100, std::uint64_t seed = 42);

// Lie derivative of the metric along v (components v^t, v^r, v^theta, v^phi),
// the 10 expressions (L_v g)_{ab}, a <= b, in row-major order.
[[nodiscard]] std::vector<std::pair<std::pair<int, int>, Expr>> killing_equations(
    const Metric& m, const std::array<Expr, 4>& v);

class GeodesicDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numeric geodesic equations u' = v, v'^a = -Gamma^a_{bc} v^b v^c for the
// metric with stand-ins substituted and parameters bound.
class GeodesicSystem {
 public:
  using State = std::array<double, 8>;  // (t, r, theta, phi, td, rd, thetad, phid)

  explicit GeodesicSystem(const Metric& m);

  [[nodiscard]] State rhs(const State& y) const;
  // r strictly inside the open domain and theta at least 1e-6 from the poles.
  [[nodiscard]] bool in_domain(const State& y) const;
  [[nodiscard]] const Metric& metric() const { return metric_; }
  // Point binding of a state plus parameters and affine parameter s.
  [[nodiscard]] sym::Point point(const State& y, double s = 0.0) const;

 private:
  Metric metric_;
  sym::Point params_;
  std::vector<std::tuple<int, int, int, Expr>> terms_;  // nonzero Gamma^a_{bc}, b <= c
};

[[nodiscard]] GeodesicSystem::State geodesic_rhs(const Metric& m, const GeodesicSystem::State& y);

}  // namespace noether::spacetime
