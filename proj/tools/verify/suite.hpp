#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace ptrotor::verify {

enum class Level { Fast, Full };

struct Outcome {
  bool passed;
  std::string detail;
};

struct Check {
  std::string id;     ///< "C01".."C11" for acceptance criteria, "S.." for supporting checks
  std::string title;
  Level level;        ///< Fast checks run at both levels
  std::function<Outcome()> run;

  bool is_criterion() const noexcept { return !id.empty() && id.front() == 'C'; }
};

struct Result {
  std::string id;
  std::string title;
  bool passed;
  std::string detail;
  double seconds;
};

/// Every check, acceptance criteria first, in id order.
const std::vector<Check>& all_checks();

/// Runs the checks allowed at `level` whose id is listed in `only` (all when
/// empty), printing one line per check to `out` as each finishes. Exceptions
/// from a check are reported as failures.
std::vector<Result> run(Level level, const std::vector<std::string>& only, std::ostream& out);

std::string format_line(const Result& r);

}  // namespace ptrotor::verify
