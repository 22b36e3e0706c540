#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wittcheck/report.hpp"

namespace wittcheck {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SuiteConfig {
  int p = 3;
  int n = 2;   // Witt length
  int N = 2;   // cyclotomic depth
  int M = 2;   // coefficient precision
  int T = 2;   // tilt depth
  int e = 0;   // char-p model: F_p[t^{1/p^e}]
  int K = 9;   // char-p model precision
  uint64_t budget = 1000000;  // largest set enumerated exhaustively
  uint64_t seed = 1;
  uint64_t samples = 100;
  unsigned workers = 1;
  std::string fixtures;  // directory of negative-control fixtures
};

// Throws ConfigError naming the violated constraint.
void validate(const SuiteConfig& c);

// The eight mathematical suites, in report order.
const std::vector<std::string>& suite_ids();
// Suites outside "all": the negative controls.
const std::vector<std::string>& extra_suite_ids();
// Expands "all" and rejects unknown ids (ConfigError). Order follows the
// canonical list; duplicates are dropped.
std::vector<std::string> resolve_suites(const std::vector<std::string>& requested);

CheckReport run_suite(const std::string& id, const SuiteConfig& c);

struct RunReport {
  SuiteConfig config;
  std::vector<CheckReport> suites;
  std::size_t count(Verdict v) const;
  // 0 when no check failed, 1 otherwise.
  int exit_code() const;
};

// Runs the suites on up to config.workers threads; output order is the
// resolved suite order regardless of scheduling.
RunReport run_suites(const SuiteConfig& c, const std::vector<std::string>& suites);

}  // namespace wittcheck
