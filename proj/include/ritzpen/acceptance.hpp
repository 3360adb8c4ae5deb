#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ritzpen {

/// Knobs for the acceptance check run.  quadrature_weight_scale exists
/// for fault injection in the test harness: any value other than 1
/// perturbs the quadrature weights used by the exact-gap check, which
/// must then fail.  It is not a user-facing feature.
struct AcceptanceOptions {
  double quadrature_weight_scale = 1.0;
  int threads = 0;           ///< concurrency for the sweep-based checks
  std::string scratch_dir;   ///< where sweep CSVs land; "" = temp dir
  int only = 0;              ///< run a single check by number; 0 = all
};

struct CheckResult {
  int number = 0;
  std::string name;
  bool passed = false;
  std::string detail;  ///< measured quantities vs their bounds
  double runtime_ms = 0.0;
};

/// Run the whole verification battery.  Never short-circuits: all nine
/// checks run and report even when earlier ones fail.  Infrastructure
/// errors (exceptions) mark the corresponding check failed with the
/// message in `detail`.
std::vector<CheckResult> run_acceptance_checks(const AcceptanceOptions& opts = {});

/// One line per check, PASS/FAIL plus the measured values.
void print_acceptance_report(const std::vector<CheckResult>& results, std::ostream& os);

/// 0 when every check passed, 1 otherwise.
int acceptance_exit_code(const std::vector<CheckResult>& results);

}  // namespace ritzpen
