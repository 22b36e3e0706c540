#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "wittcheck/report_io.hpp"
#include "wittcheck/suites.hpp"

#ifndef WITTCHECK_FIXTURES
#define WITTCHECK_FIXTURES "tests/fixtures"
#endif

namespace {

constexpr int kUsage = 2;

void print_summary(const wittcheck::RunReport& r) {
  for (const auto& s : r.suites)
    std::cout << s.suite << ": " << (s.passed() ? "pass" : "fail") << " ("
              << s.count(wittcheck::Verdict::Pass) << " pass, " << s.count(wittcheck::Verdict::Fail) << " fail, "
              << s.count(wittcheck::Verdict::TruncationLimited) << " truncation-limited)\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace wittcheck;
  SuiteConfig cfg;
  cfg.fixtures = WITTCHECK_FIXTURES;
  std::vector<std::string> suites{"all"};
  std::string out;
  std::string format = "text";
  bool list = false;
  bool timings = false;

  CLI::App app{"Exact checks of Witt-vector, tilt and de Rham-Witt identities on finite models"};
  app.add_option("--suite", suites, "Suites to run (repeatable); 'all' selects the eight standard suites");
  app.add_option("-p", cfg.p, "Odd prime")->capture_default_str();
  app.add_option("-n", cfg.n, "Witt length")->capture_default_str();
  app.add_option("-N", cfg.N, "Cyclotomic depth: Z[zeta_{p^N}]")->capture_default_str();
  app.add_option("-M", cfg.M, "Coefficient precision: modulo p^M")->capture_default_str();
  app.add_option("-T", cfg.T, "Tilt depth")->capture_default_str();
  app.add_option("-e", cfg.e, "Char-p model: F_p[t^{1/p^e}]")->capture_default_str();
  app.add_option("-K", cfg.K, "Char-p model precision: modulo t^K")->capture_default_str();
  app.add_option("--budget", cfg.budget, "Largest set enumerated exhaustively (PAPERCHECK_BUDGET overrides)")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--samples", cfg.samples, "Samples per sampled check")->capture_default_str();
  app.add_option("--workers", cfg.workers, "Suites run concurrently")->capture_default_str();
  app.add_option("--fixtures", cfg.fixtures, "Directory of negative-control fixtures")->capture_default_str();
  app.add_option("--out", out, "Write the report to this file instead of stdout");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  app.add_flag("--list", list, "Print the selected suite ids and exit");
  app.add_flag("--timings", timings, "Include wall times in JSON reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  if (const char* env = std::getenv("PAPERCHECK_BUDGET")) {
    try {
      std::size_t used = 0;
      const unsigned long long b = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      cfg.budget = b;
    } catch (const std::exception&) {
      std::cerr << "error: PAPERCHECK_BUDGET is not a non-negative integer: '" << env << "'\n";
      return kUsage;
    }
  }

  std::vector<std::string> selected;
  try {
    selected = resolve_suites(suites);
    validate(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  if (list) {
    for (const auto& s : selected) std::cout << s << "\n";
    return 0;
  }

  RunReport report;
  try {
    report = run_suites(cfg, selected);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (out.empty()) {
      std::cout << (format == "json" ? report_to_json(report, timings) : report_to_text(report));
    } else {
      write_report(report, out, format, format == "json" ? timings : true);
      print_summary(report);
    }
  } catch (const ReportIOError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return report.exit_code();
}
