#pragma once

// Named invariant checks. Each check records a measured defect and the tolerance it must not
// exceed; `verify` passes iff every check does.

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sislab/config.hpp"
#include "sislab/fiberization.hpp"

namespace sislab {

struct Check {
  std::string group;
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;

  double margin() const { return tolerance - measured; }
};

struct VerifyReport {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  /// Wall time per group. Informational only; never part of the JSON report.
  std::vector<std::pair<std::string, double>> group_seconds;

  bool all_pass() const;
  /// Checks in `group`; empty when the group did not run.
  std::vector<const Check*> group(const std::string& name) const;
  bool group_pass(const std::string& name) const;
  /// "name=pass|fail" lines, the part of a report that must not depend on seed or threads.
  std::string verdicts() const;
};

/// Groups, in run order: shannon_system, hat_system, s_independence, decomposition,
/// operators, dimension_map, duality, oracle.
VerifyReport run_verify(const RunConfig& config);

nlohmann::ordered_json verify_to_json(const VerifyReport& report);

/// Fibers of `specs` at weight s, each replaced by tau_s phi first when `transport` is set.
std::vector<FiberField> fiberize_system(const std::vector<GeneratorSpec>& specs, double s,
                                        const RunConfig& config);
std::vector<GeneratorSpec> transported(const std::vector<GeneratorSpec>& specs, double s,
                                       bool transport);

/// Gramian entries against cross_bracket_bruteforce at K_large = 10 K on every grid point.
/// `perturb` is added to G(t_{M/2})_{11} first, as a sensitivity canary.
Check oracle_gramian_check(const std::vector<GeneratorSpec>& specs,
                           const std::vector<FiberField>& fields, double s, double perturb,
                           double tolerance, const std::string& name);

}  // namespace sislab
