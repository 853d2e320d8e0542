#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tinsim::app {

struct Check {
  std::string id;
  std::string description;
  double measured = 0.0;
  std::string tolerance;
  bool pass = false;
  /// Printed for context; does not affect the verdict.
  bool informational = false;
};

struct CriterionResult {
  int number = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool pass() const;
};

inline constexpr int kCriterionCount = 8;

/// Runs one acceptance criterion (1-based). `threads` bounds the number of
/// concurrent oracle runs.
CriterionResult run_criterion(int number, unsigned threads);

void print_criterion(std::ostream& out, const CriterionResult& r);

/// Runs the listed criteria (all when empty), prints each as it completes and
/// returns true when every one passes.
bool run_verification(std::ostream& out, const std::vector<int>& criteria, unsigned threads);

}  // namespace tinsim::app
