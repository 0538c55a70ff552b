#pragma once

#include <functional>
#include <string>
#include <vector>

namespace anticyc::app {

struct CriterionResult {
  int id = 0;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

/// Runs criteria 1-9 in order, reporting each as it finishes. An exception
/// inside a criterion fails that criterion only.
std::vector<CriterionResult> run_acceptance(const std::function<void(const CriterionResult&)>& report = {});

std::string format_result(const CriterionResult& r);

}  // namespace anticyc::app
