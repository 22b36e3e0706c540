#pragma once

#include <string>
#include <utility>
#include <vector>

namespace wittcheck {

enum class Verdict { Pass, Fail, TruncationLimited };

const char* verdict_name(Verdict v);

// One verified statement. Witnesses and precision metadata are ordered
// (key, serialized value) pairs so reports stay byte-stable.
struct CheckResult {
  std::string id;
  std::string anchor;
  Verdict verdict = Verdict::Pass;
  std::vector<std::pair<std::string, std::string>> witnesses;
  std::vector<std::pair<std::string, std::string>> precision;
  std::vector<std::string> notes;

  CheckResult& witness(std::string key, std::string value) {
    witnesses.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  CheckResult& meta(std::string key, std::string value) {
    precision.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  CheckResult& note(std::string text) {
    notes.push_back(std::move(text));
    return *this;
  }
  // Downgrades to Fail when `ok` is false; never upgrades.
  CheckResult& require(bool ok) {
    if (!ok) verdict = Verdict::Fail;
    return *this;
  }
  bool passed() const { return verdict != Verdict::Fail; }
};

struct CheckReport {
  std::string suite;
  std::vector<CheckResult> checks;
  double seconds = 0.0;

  void add(CheckResult r) { checks.push_back(std::move(r)); }
  void append(const CheckReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  }
  bool passed() const;
  std::size_t count(Verdict v) const;
};

}  // namespace wittcheck
