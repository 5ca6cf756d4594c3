#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace ltt {

/// One measured quantity against a pinned bound.
struct Check {
  std::string label;
  double measured = 0.0;
  std::string relation;  // "<=", ">=", "<", ">", "in"
  double bound = 0.0;
  double bound_high = 0.0;  // upper end when relation is "in"
  bool passed = false;
  bool informational = false;  // reported but does not decide the criterion
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;
  double time_limit = 0.0;
  std::string note;  // set when the criterion could not run

  bool passed() const;
};

struct VerifyOptions {
  std::filesystem::path data_dir;  // holds digits-images.idx3-ubyte / digits-labels.idx1-ubyte
  std::uint64_t seed = 0;
  std::function<void(const std::string&)> log;  // progress messages, optional
};

inline constexpr int kCriterionCount = 8;

CriterionResult run_criterion(int id, const VerifyOptions& options);

/// Writes a checkpoint, corrupts a copy and checks that loading the copy fails
/// with a parse error while the intact file still loads.
CriterionResult check_corrupted_checkpoint(const std::filesystem::path& scratch_dir);

/// "PASS  [n] title (1.2 s)" followed by one indented line per check.
void print_result(std::ostream& os, const CriterionResult& result);

}  // namespace ltt
