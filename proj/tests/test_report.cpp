#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "wittcheck/report_io.hpp"

using namespace wittcheck;

namespace {

RunReport sample_report() {
  SuiteConfig c;
  c.seed = 7;
  RunReport r;
  r.config = c;
  CheckReport s;
  s.suite = "witt-identities";
  s.seconds = 0.25;
  CheckResult a;
  a.id = "FV=p";
  a.anchor = "F V = p on W_n(A)";
  a.meta("ring", "cyc(3,2,2)").meta("mode", "exhaustive");
  CheckResult b;
  b.id = "exact @ W_2";
  b.anchor = "kernel equals image";
  b.verdict = Verdict::Fail;
  b.witness("kernel element outside image", "W[p=3,n=2; 1 + z; 0]");
  b.note("quoted \"text\" survives");
  CheckResult t;
  t.id = "limit";
  t.anchor = "stable in the limit";
  t.verdict = Verdict::TruncationLimited;
  s.add(a);
  s.add(b);
  s.add(t);
  r.suites.push_back(s);
  return r;
}

bool same(const CheckResult& x, const CheckResult& y) {
  return x.id == y.id && x.anchor == y.anchor && x.verdict == y.verdict && x.witnesses == y.witnesses &&
         x.precision == y.precision && x.notes == y.notes;
}

}  // namespace

TEST_CASE("json round trip") {
  const RunReport r = sample_report();
  const std::string js = report_to_json(r);
  const RunReport back = report_from_json(js);
  CHECK(report_to_json(back) == js);
  REQUIRE(back.suites.size() == 1);
  REQUIRE(back.suites[0].checks.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(same(back.suites[0].checks[i], r.suites[0].checks[i]));
  CHECK(back.config.seed == 7);
  CHECK(back.exit_code() == 1);

  const std::string timed = report_to_json(r, true);
  CHECK(report_to_json(report_from_json(timed), true) == timed);
}

TEST_CASE("json carries the schema version and summary") {
  const std::string js = report_to_json(sample_report());
  CHECK(js.find("\"schema\": \"1\"") != std::string::npos);
  CHECK(js.find("\"seconds\"") == std::string::npos);
  CHECK(js.find("\"exit_code\": 1") != std::string::npos);
  CHECK_THROWS_AS(report_from_json("{"), ReportIOError);
  CHECK_THROWS_AS(report_from_json("{\"schema\": \"2\"}"), ReportIOError);
}

TEST_CASE("text report cites each claim") {
  const std::string txt = report_to_text(sample_report());
  for (const char* anchor : {"F V = p on W_n(A)", "kernel equals image", "stable in the limit"})
    CHECK(txt.find(std::string("claim: ") + anchor) != std::string::npos);
  CHECK(txt.find("[fail] exact @ W_2") != std::string::npos);
  CHECK(txt.find("[truncation-limited] limit") != std::string::npos);
}

TEST_CASE("write_report reports the path on failure") {
  const RunReport r = sample_report();
  const std::string path = "report_test_out.json";
  write_report(r, path, "json", false);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == report_to_json(r));
  std::remove(path.c_str());
  CHECK_THROWS_WITH_AS(write_report(r, "/nonexistent-dir/x.json", "json", false),
                       doctest::Contains("/nonexistent-dir/x.json"), ReportIOError);
  CHECK_THROWS_AS(write_report(r, path, "yaml", false), ReportIOError);
}
