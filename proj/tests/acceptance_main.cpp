#include <iostream>

#include "fracfilt/acceptance.hpp"

int main() {
  int failures = 0;
  for (int id : fracfilt::criterion_ids()) {
    const auto r = fracfilt::run_criterion(id);
    std::cout << fracfilt::format_result(r) << std::endl;
    if (!r.pass) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
  return failures == 0 ? 0 : 1;
}
