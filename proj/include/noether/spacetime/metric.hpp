#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "noether/symbolic/expression.hpp"
#include "noether/symbolic/sampling.hpp"

namespace noether::spacetime {

using sym::Expr;
using sym::Symbol;

// e^lambda = r^2, or e^lambda = 1 (a constant absorbed into dOmega^2).
enum class LambdaBranch { radius_squared, unit };

[[nodiscard]] std::string_view branch_name(LambdaBranch b);  // "r2" | "unit"

// ds^2 = e^nu dt^2 - e^mu dr^2 - e^lambda (dtheta^2 + sin^2 theta dphi^2)
struct Metric {
  std::string name;
  Expr nu;
  Expr mu;
  LambdaBranch lambda = LambdaBranch::radius_squared;
  std::map<Symbol, double> params;
  sym::Interval domain{0.0, 10.0};  // open interval of r
  // Concrete profiles used for numerics when nu or mu is left arbitrary.
  std::optional<Expr> standin_nu;
  std::optional<Expr> standin_mu;

  [[nodiscard]] Expr exp_nu() const;
  [[nodiscard]] Expr exp_mu() const;
  [[nodiscard]] Expr exp_lambda() const;
  // Diagonal components g_tt, g_rr, g_thth, g_phph (simplified).
  [[nodiscard]] std::array<Expr, 4> diagonal() const;
  [[nodiscard]] bool has_arbitrary_profile() const;
  // Replace arbitrary profiles by their stand-ins (if any).
  [[nodiscard]] Metric concrete() const;
  // Sampling window: r kept 5% of the domain width away from each end,
  // parameters fixed at their declared values.
  [[nodiscard]] sym::SampleDomain sample_domain() const;
  // Point binding of the parameters.
  [[nodiscard]] sym::Point parameter_point() const;
};

// L = e^nu td^2 - e^mu rd^2 - e^lambda (thetad^2 + sin^2 theta phid^2)
[[nodiscard]] Expr lagrangian(const Metric& m);

// The profile nu(r) or mu(r) as an unknown function.
[[nodiscard]] Expr arbitrary_profile(sym::UnknownName which);

[[nodiscard]] Metric flat_metric();
// nu(r), mu(r) left symbolic, for the determining system.
[[nodiscard]] Metric symbolic_family(LambdaBranch branch);

class MetricParseError : public std::runtime_error {
 public:
  MetricParseError(const std::string& message, std::size_t line);
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Key-value text format, one `key = value` per line, '#' starts a comment:
//   name = <text>
//   nu = <expr> | arbitrary
//   mu = <expr> | arbitrary
//   lambda = r2 | unit
//   params.<alpha|beta|a|b|p> = <real>
//   domain = (<lo>, <hi>)          hi may be "inf"
//   standin.nu = <expr>            optional, used when nu is arbitrary
//   standin.mu = <expr>
// nu, mu, lambda and domain are required.
[[nodiscard]] Metric parse_metric(std::string_view text, const std::string& fallback_name = "");
[[nodiscard]] Metric load_metric(const std::filesystem::path& path);
[[nodiscard]] std::string format_metric(const Metric& m);

struct MetricCheck {
  bool ok = true;
  std::string message;
  int samples = 0;
};

// e^nu > 0 and e^mu > 0 at 100 seeded points of the domain, so the signature
// is (+,-,-,-) there.
[[nodiscard]] MetricCheck check_metric(const Metric& m, std::uint64_t seed = 42);

}  // namespace noether::spacetime
