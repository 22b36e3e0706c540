#include "wittcheck/report.hpp"

#include <algorithm>

namespace wittcheck {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::TruncationLimited:
      return "truncation-limited";
  }
  return "fail";
}

bool CheckReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

std::size_t CheckReport::count(Verdict v) const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [v](const CheckResult& c) { return c.verdict == v; }));
}

}  // namespace wittcheck
