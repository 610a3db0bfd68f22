#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "noether/spacetime/geometry.hpp"
#include "noether/symmetry/noether.hpp"

namespace noether::numeric {

using State = spacetime::GeodesicSystem::State;

struct IntegratorStats {
  int steps = 0;
  int rejected = 0;
  double tol = 0.0;
};

struct GeodesicTrajectory {
  std::string metric;
  std::vector<double> s;        // strictly monotone affine parameter samples
  std::vector<State> states;
  IntegratorStats stats;
};

// Raised when the solution leaves the metric domain; carries the last
// affine parameter at which the state was valid.
class DomainExitError : public std::runtime_error {
 public:
  DomainExitError(const std::string& message, double last_valid_s)
      : std::runtime_error(message), last_valid_s_(last_valid_s) {}
  [[nodiscard]] double last_valid_s() const { return last_valid_s_; }

 private:
  double last_valid_s_;
};

class StepSizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMinOutputPoints = 200;

// Dormand-Prince 5(4) with error control per step: |y5 - y4|_i <= tol * max(1, |y_i|).
// A negative length integrates backwards. Output at `points` + 1 evenly
// spaced parameters (points >= 200).
[[nodiscard]] GeodesicTrajectory integrate_geodesic(const spacetime::GeodesicSystem& system, const State& init,
                                                    double length, double tol, int points = kMinOutputPoints);
[[nodiscard]] GeodesicTrajectory integrate_geodesic(const spacetime::Metric& m, const State& init, double length,
                                                    double tol, int points = kMinOutputPoints);

struct DriftReport {
  std::string integral;
  double initial = 0.0;
  double max_abs_change = 0.0;
  double relative_drift = 0.0;  // max |I(s) - I(0)| / max(1, |I(0)|)
  std::size_t samples = 0;
};

// Evaluate a first integral at every sample of the trajectory.
[[nodiscard]] DriftReport conservation_drift(const spacetime::GeodesicSystem& system, const GeodesicTrajectory& tr,
                                             const symmetry::FirstIntegral& fi);

// Delimited text: comment header with metric and seed, then
// s t r theta phi td rd thetad phid per line.
[[nodiscard]] std::string export_trajectory(const GeodesicTrajectory& tr, std::uint64_t seed);

// Seeded initial state inside the metric's standoff window: coordinates from
// Metric::sample_domain, velocities uniform in [-1, 1].
[[nodiscard]] State random_initial_state(const spacetime::Metric& m, sym::Rng& rng);

// Integrate from `init`, halving the initial velocities after each domain
// exit (up to `attempts` times). Geodesics are invariant under velocity
// scaling up to reparametrization, so this keeps the path inside the domain.
[[nodiscard]] GeodesicTrajectory integrate_within_domain(const spacetime::GeodesicSystem& system, State init,
                                                         double length, double tol, int attempts = 12);

}  // namespace noether::numeric
