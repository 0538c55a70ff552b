#include <algorithm>
#include <iostream>

#include "acceptance.hpp"

int main() {
  auto results = anticyc::app::run_acceptance(
      [](const anticyc::app::CriterionResult& r) { std::cout << anticyc::app::format_result(r) << std::endl; });
  bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
  return ok ? 0 : 1;
}
