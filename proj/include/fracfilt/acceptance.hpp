#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace fracfilt {

struct CriterionResult {
  int id = 0;
  std::string title;
  /// Numerical checks only.
  bool checks_pass = false;
  /// Checks and runtime budget.
  bool pass = false;
  double seconds = 0.0;
  double budget = 0.0;
  std::string detail;
  nlohmann::json measured;
};

/// Ids 1..11.
std::vector<int> criterion_ids();

/// Runs one acceptance criterion. Throws DomainError for an unknown id.
CriterionResult run_criterion(int id);

/// One line: "PASS  3  title  (t s / budget s)  detail".
std::string format_result(const CriterionResult& r);

}  // namespace fracfilt
