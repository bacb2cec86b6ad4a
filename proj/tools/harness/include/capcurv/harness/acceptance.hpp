#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace capcurv::harness {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string measured;
  std::string tolerance;
  double seconds = 0.0;
  double time_limit = 0.0;  // seconds; exceeding it fails the criterion
};

enum class Suite { fast, full };

/// "fast" or "full"; nullopt otherwise.
std::optional<Suite> parse_suite(const std::string& name);

/// Runs every criterion of the suite in order. The fast suite skips the
/// variational criteria and the variational half of the bound-ordering check.
std::vector<CriterionResult> run_suite(Suite suite, int workers = 1);

std::string format_criterion(const CriterionResult& r);

/// `verify <suite>`: one line per criterion, a summary line, exit 0 iff all
/// pass, 2 for an unknown suite name.
int verify_command(const std::string& suite_name, int workers, std::ostream& out,
                   std::ostream& err);

}  // namespace capcurv::harness
