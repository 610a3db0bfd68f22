#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "noether/spacetime/metric.hpp"
#include "noether/symbolic/simplify.hpp"
#include "noether/symmetry/generator.hpp"

namespace noether::catalog {

using spacetime::Metric;
using symmetry::Generator;
using sym::Expr;

// Expected first integral from the tables. generator == "*" marks an
// unlabelled expression matched against every generator by structure.
// The token L stands for the Lagrangian.
struct ExpectedIntegral {
  std::string generator;
  std::string text;
};

// Corrected form of a printed expression, used when the printed one fails.
struct Erratum {
  std::string generator;
  std::string text;
  std::string reason;
};

// [left, right] = sum coefficient * generator; coefficients are DSL
// expressions in the metric parameters.
struct ExpectedCommutator {
  std::string left;
  std::string right;
  std::vector<std::pair<std::string, std::string>> terms;  // empty: the bracket vanishes
  std::string reason;  // errata only
};

// A generator as printed, when the catalog stores a corrected form.
struct PrintedForm {
  Generator generator;
  std::optional<sym::Interval> domain;  // r-range for a formal check
};

struct CatalogEntry {
  std::string class_id;  // I..VI
  int case_no = 1;
  std::string anchor;
  std::string provenance = "printed";
  std::vector<std::string> notes;
  Metric metric;
  std::vector<Generator> generators;
  int expected_dimension = 0;
  bool common_integrals = false;
  std::vector<ExpectedIntegral> integrals;
  std::vector<Erratum> errata;
  bool commutators_complete = false;  // unlisted brackets are printed as zero
  std::vector<ExpectedCommutator> commutators;
  std::vector<ExpectedCommutator> commutator_errata;  // corrected relations
  std::vector<PrintedForm> printed;
  std::filesystem::path dir;

  [[nodiscard]] std::string label() const { return class_id + "(" + std::to_string(case_no) + ")"; }
  [[nodiscard]] const Generator* find(const std::string& name) const;
};

class CatalogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// $NOETHER_CATALOG_DIR if set, else the bundled catalog.
[[nodiscard]] std::filesystem::path default_catalog_dir();

// Directory layout: <root>/<class>/<case>/{entry.txt, metric.mtr, *.gen},
// with the minimal generators and their integrals under <root>/common.
[[nodiscard]] CatalogEntry load_entry(const std::filesystem::path& dir, const std::filesystem::path& root);
// Ordered by class (I..VI), then case.
[[nodiscard]] std::vector<CatalogEntry> load_catalog(const std::filesystem::path& root = default_catalog_dir());

inline constexpr const char* kClassIds[] = {"I", "II", "III", "IV", "V", "VI"};
[[nodiscard]] int class_index(const std::string& class_id);  // -1 when unknown
// Dimension of the Noether algebra of each class: 5, 6, 7, 9, 11, 17.
[[nodiscard]] int class_dimension(const std::string& class_id);

}  // namespace noether::catalog
