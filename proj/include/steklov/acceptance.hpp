#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "steklov/adaptivity.hpp"
#include "steklov/studies.hpp"
#include "steklov/verification.hpp"

namespace steklov {

/// One named check of the verification report.
struct CheckResult {
  int criterion = 0;
  std::string name;
  std::string expected;
  std::string observed;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct AcceptanceOptions {
  /// Square-only subset (criteria 3, 7 and 8, square checks only).
  bool quick = false;
  /// Progress messages; may be null.
  std::ostream* log = nullptr;
  DiskReference disk = disk_reference();
  PolygonReference polygon = polygon_reference();
  /// Red refinements of the disk mesh for criteria 1 and 2.
  int disk_refinements = 7;
  /// Uniform levels for criteria 3, 4, 6 and 9.
  int uniform_levels = 4;
  /// Adaptive runs for criteria 5 and 6.
  int adapt_max_dof = 200000;
  double theta = 0.5;
};

class AcceptanceSuite {
public:
  explicit AcceptanceSuite(AcceptanceOptions options = {});

  /// Criteria run by run_all(): 1..9, or 3, 7, 8 in quick mode.
  std::vector<int> criteria() const;
  std::vector<CheckResult> run_criterion(int criterion);
  std::vector<CheckResult> run_all();

private:
  const UniformStudy& uniform(DomainKind kind, const cplx& n, int levels);
  const AdaptRun& adaptive(DomainKind kind);
  void log(const std::string& message) const;

  std::vector<CheckResult> disk_spectrum(int criterion, bool complex_n);
  std::vector<CheckResult> convergence_orders();
  std::vector<CheckResult> polygon_references();
  std::vector<CheckResult> adaptive_optimality();
  std::vector<CheckResult> adaptive_superiority();
  std::vector<CheckResult> source_rates();
  std::vector<CheckResult> property_suite();
  std::vector<CheckResult> monotonicity();

  AcceptanceOptions options_;
  std::map<std::pair<int, int>, UniformStudy> uniform_cache_;  // (domain, complex) -> study
  std::map<int, AdaptRun> adapt_cache_;
};

/// True when every check of the criterion passed (and there is at least one).
bool criterion_passed(const std::vector<CheckResult>& results, int criterion);

/// One-line title of a criterion.
std::string criterion_title(int criterion);

/// JSON array of {criterion, name, expected, observed, tolerance, pass, note}.
std::string report_json(const std::vector<CheckResult>& results);

}  // namespace steklov
