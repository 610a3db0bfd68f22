#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "noether/catalog/catalog.hpp"
#include "noether/symmetry/noether.hpp"

namespace noether::catalog {

// Noether check of one generator. When the printed gauge fails but the
// residual without gauge is c * D(gauge) for a rational c, the gauge is
// replaced by c * gauge and the correction is recorded.
struct GeneratorCheck {
  std::string name;
  std::string status;  // symbolic-zero | numeric-zero | nonzero | undecided
  bool verified = false;
  std::optional<sym::Point> witness;
  double witness_value = 0.0;
  std::string gauge_correction;  // empty when the printed gauge works
  Generator effective;           // generator with the gauge actually used
  std::string killing;           // "killing", "not-killing" or "n/a"
};

[[nodiscard]] GeneratorCheck check_generator(const Metric& m, const Generator& g, std::uint64_t seed);

enum class IntegralOutcome { matched, matched_erratum, no_table_entry, mismatch };
[[nodiscard]] std::string outcome_name(IntegralOutcome o);

struct IntegralCheck {
  std::string generator;
  IntegralOutcome outcome = IntegralOutcome::no_table_entry;
  std::string table;       // expression that matched (or the printed one on mismatch)
  std::string engine;      // Noether integral computed by the engine
  double factor = 0.0;     // engine = factor * table + offset
  double offset = 0.0;
  std::string factor_rational;
  std::string reason;      // erratum reason or mismatch detail
};

// engine = k * table + c at `points` seeded phase-space points, with the
// fit residual below 1e-9 relative.
struct LinearFit {
  bool ok = false;
  double factor = 0.0;
  double offset = 0.0;
  double residual = 0.0;
};
[[nodiscard]] LinearFit fit_integral(const Expr& engine, const Expr& table, const sym::SampleDomain& domain,
                                     std::uint64_t seed, int points = 20);

struct DriftCheck {
  std::string generator;
  double max_drift = 0.0;
  int trajectories = 0;
  bool pass = false;
  std::string error;
};

struct CommutatorCheck {
  std::string relation;  // printed form, e.g. "[X0, X42] = 1/a X52"
  std::string engine;    // computed right-hand side
  bool pass = false;
  bool explained = false;  // the engine matches a catalogued corrected relation
  std::string erratum;
};

struct PrintedCheck {
  std::string generator;
  std::string status;
  std::string domain;
};

struct VerifyOptions {
  bool integrals = true;
  bool drift = true;
  int trajectories = 5;
  double length = 10.0;
  double tol = 1e-10;
  double drift_limit = 1e-6;
  bool closure = true;  // verify every pairwise bracket as a Noether symmetry
};

struct EntryReport {
  std::string label;
  std::string provenance;
  std::uint64_t seed = 0;
  std::vector<GeneratorCheck> generators;
  int expected_dimension = 0;
  int verified_dimension = 0;  // rank of the verified generators
  std::vector<IntegralCheck> integrals;
  std::vector<DriftCheck> drifts;
  std::vector<CommutatorCheck> commutators;
  bool closed = false;
  std::string closure_error;
  double jacobi_residual = 0.0;
  int bracket_pairs_verified = 0;
  int bracket_pairs = 0;
  std::vector<PrintedCheck> printed;
  std::vector<std::string> notes;
  double seconds = 0.0;

  [[nodiscard]] bool generators_pass() const;
  [[nodiscard]] bool dimension_pass() const;
  [[nodiscard]] bool commutators_pass() const;          // mismatches explained by errata allowed
  [[nodiscard]] bool printed_commutators_pass() const;  // every printed relation as printed
  [[nodiscard]] bool drift_pass() const;
  [[nodiscard]] bool integrals_pass() const;  // no unexplained table mismatch
  // All generators verify, dimension matches, commutators match, drifts within tolerance.
  [[nodiscard]] bool pass() const;
};

[[nodiscard]] EntryReport verify_entry(const CatalogEntry& e, std::uint64_t seed = 42,
                                       const VerifyOptions& options = {});

// Number of linearly independent vector fields among `gens` (5 components,
// evaluated at seeded points of the metric's sampling window).
[[nodiscard]] int generator_rank(const std::vector<Generator>& gens, const Metric& m, std::uint64_t seed);

struct Classification {
  std::string class_id;     // I..VI, or empty when the dimension matches no class
  std::string description;  // e.g. "class I (minimal)"
  int dimension = 0;
  std::vector<std::string> verified;  // "<entry>:<generator>" that verified
  std::string matched_entry;          // first entry whose generators all verify
};

// Run every catalog generator on `m` (the metric's parameters override the
// template's) and count independent verified symmetries. Throws
// std::invalid_argument when nu or mu depend on anything but r.
[[nodiscard]] Classification classify_metric(const Metric& m, const std::vector<CatalogEntry>& catalog,
                                             std::uint64_t seed = 42);

// Negative controls.
// Multiply one nonzero component of one non-trivial generator by (1 + r/7).
[[nodiscard]] CatalogEntry perturb_generator(const CatalogEntry& e, std::uint64_t seed, std::string* which = nullptr);
// nu -> nu + r/5; class I entries (whose five symmetries survive any static
// change of nu) get nu -> nu + r t/5 instead.
[[nodiscard]] CatalogEntry perturb_metric(const CatalogEntry& e);

}  // namespace noether::catalog
