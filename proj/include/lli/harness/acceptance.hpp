#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace lli::harness {

enum class CriterionStatus { kPass, kFail, kNotApplicable };

struct CriterionResult {
  int id = 0;
  std::string name;
  CriterionStatus status = CriterionStatus::kFail;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  // Empty means all criteria.
  std::set<int> only;
  // Directory containing the committed planted-violation history logs.
  std::string corpus_dir;
};

// Runs the acceptance criteria, printing one PASS/FAIL/N/A line each.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& log);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace lli::harness
