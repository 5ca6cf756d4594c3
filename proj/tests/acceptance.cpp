// Acceptance suite: one PASS/FAIL line per criterion followed by its measurements.
// Usage: acceptance [criterion ids...]   (default: all)

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "ltt/verification.hpp"

int main(int argc, char** argv) {
  ltt::VerifyOptions options;
  const char* dir = std::getenv("LTT_DATA_DIR");
#ifdef LTT_DEFAULT_DATA_DIR
  options.data_dir = dir ? dir : LTT_DEFAULT_DATA_DIR;
#else
  options.data_dir = dir ? dir : "tests/fixtures";
#endif
  options.log = [](const std::string& msg) { std::cerr << "  .. " << msg << "\n"; };

  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::stoi(argv[i]));
  if (ids.empty()) {
    for (int id = 1; id <= ltt::kCriterionCount; ++id) ids.push_back(id);
  }

  int failed = 0;
  for (int id : ids) {
    const ltt::CriterionResult result = ltt::run_criterion(id, options);
    ltt::print_result(std::cout, result);
    std::cout.flush();
    if (!result.passed()) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
