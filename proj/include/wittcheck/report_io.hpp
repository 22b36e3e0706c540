#pragma once

#include <stdexcept>
#include <string>

#include "wittcheck/suites.hpp"

namespace wittcheck {

class ReportIOError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kReportSchema = "1";

// Deterministic JSON; wall times are included only when `timings` is set.
std::string report_to_json(const RunReport& r, bool timings = false);
// Inverse of report_to_json. Throws ReportIOError on malformed input.
RunReport report_from_json(const std::string& text);
// Human-readable report citing each check's claim.
std::string report_to_text(const RunReport& r, bool timings = true);
// format is "json" or "text". Throws ReportIOError naming the path.
void write_report(const RunReport& r, const std::string& path, const std::string& format, bool timings);

}  // namespace wittcheck
