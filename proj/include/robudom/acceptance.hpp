#pragma once

// The acceptance suite shared by `robudom verify` and the acceptance test.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace robudom {

struct AcceptanceOptions {
  // Only the criteria that finish in well under a minute.
  bool quick = false;
  // Criterion names to run; empty runs all (or the quick subset).
  std::vector<std::string> only;
  std::size_t threads = 0;
  std::uint64_t seed = 20240601;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct CriterionInfo {
  int id;
  const char* name;
  bool quick;
};

const std::vector<CriterionInfo>& acceptance_criteria();

// Runs the selected criteria in id order. With `log`, prints one
// "PASS|FAIL <id> <name>: detail" line per criterion as it completes.
// Unknown names in `only` throw std::invalid_argument.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream* log);

}  // namespace robudom
