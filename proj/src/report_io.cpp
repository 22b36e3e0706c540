#include "wittcheck/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace wittcheck {

namespace {

using ojson = nlohmann::ordered_json;

ojson pairs_to_json(const std::vector<std::pair<std::string, std::string>>& v) {
  ojson a = ojson::array();
  for (const auto& [k, x] : v) a.push_back(ojson::array({k, x}));
  return a;
}

std::vector<std::pair<std::string, std::string>> pairs_from_json(const ojson& a) {
  std::vector<std::pair<std::string, std::string>> v;
  for (const auto& e : a) v.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
  return v;
}

Verdict verdict_from_name(const std::string& s) {
  for (Verdict v : {Verdict::Pass, Verdict::Fail, Verdict::TruncationLimited})
    if (s == verdict_name(v)) return v;
  throw ReportIOError("unknown verdict '" + s + "'");
}

ojson counts(std::size_t pass, std::size_t fail, std::size_t tl) {
  ojson c;
  c["pass"] = pass;
  c["fail"] = fail;
  c["truncation-limited"] = tl;
  return c;
}

std::string seconds_str(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f s", s);
  return buf;
}

}  // namespace

std::string report_to_json(const RunReport& r, bool timings) {
  ojson j;
  j["schema"] = kReportSchema;
  j["tool"] = "paper-check";
  const SuiteConfig& c = r.config;
  j["config"] = {{"p", c.p},           {"n", c.n},         {"N", c.N},           {"M", c.M},
                 {"T", c.T},           {"e", c.e},         {"K", c.K},           {"budget", c.budget},
                 {"seed", c.seed},     {"samples", c.samples}};
  ojson suites = ojson::array();
  for (const auto& s : r.suites) {
    ojson js;
    js["suite"] = s.suite;
    js["verdict"] = s.passed() ? "pass" : "fail";
    js["counts"] = counts(s.count(Verdict::Pass), s.count(Verdict::Fail), s.count(Verdict::TruncationLimited));
    if (timings) js["seconds"] = s.seconds;
    ojson checks = ojson::array();
    for (const auto& k : s.checks) {
      ojson jc;
      jc["id"] = k.id;
      jc["anchor"] = k.anchor;
      jc["verdict"] = verdict_name(k.verdict);
      jc["witnesses"] = pairs_to_json(k.witnesses);
      jc["precision"] = pairs_to_json(k.precision);
      jc["notes"] = k.notes;
      checks.push_back(std::move(jc));
    }
    js["checks"] = std::move(checks);
    suites.push_back(std::move(js));
  }
  j["suites"] = std::move(suites);
  ojson summary =
      counts(r.count(Verdict::Pass), r.count(Verdict::Fail), r.count(Verdict::TruncationLimited));
  summary["exit_code"] = r.exit_code();
  j["summary"] = std::move(summary);
  return j.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text) {
  try {
    const ojson j = ojson::parse(text);
    if (j.at("schema").get<std::string>() != kReportSchema)
      throw ReportIOError("unsupported report schema '" + j.at("schema").get<std::string>() + "'");
    RunReport r;
    const auto& c = j.at("config");
    r.config.p = c.at("p").get<int>();
    r.config.n = c.at("n").get<int>();
    r.config.N = c.at("N").get<int>();
    r.config.M = c.at("M").get<int>();
    r.config.T = c.at("T").get<int>();
    r.config.e = c.at("e").get<int>();
    r.config.K = c.at("K").get<int>();
    r.config.budget = c.at("budget").get<uint64_t>();
    r.config.seed = c.at("seed").get<uint64_t>();
    r.config.samples = c.at("samples").get<uint64_t>();
    for (const auto& js : j.at("suites")) {
      CheckReport s;
      s.suite = js.at("suite").get<std::string>();
      s.seconds = js.value("seconds", 0.0);
      for (const auto& jc : js.at("checks")) {
        CheckResult k;
        k.id = jc.at("id").get<std::string>();
        k.anchor = jc.at("anchor").get<std::string>();
        k.verdict = verdict_from_name(jc.at("verdict").get<std::string>());
        k.witnesses = pairs_from_json(jc.at("witnesses"));
        k.precision = pairs_from_json(jc.at("precision"));
        k.notes = jc.at("notes").get<std::vector<std::string>>();
        s.checks.push_back(std::move(k));
      }
      r.suites.push_back(std::move(s));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ReportIOError(std::string("malformed report: ") + e.what());
  }
}

std::string report_to_text(const RunReport& r, bool timings) {
  std::ostringstream o;
  const SuiteConfig& c = r.config;
  o << "paper-check report (schema " << kReportSchema << ")\n";
  o << "config: p=" << c.p << " n=" << c.n << " N=" << c.N << " M=" << c.M << " T=" << c.T << " e=" << c.e
    << " K=" << c.K << " budget=" << c.budget << " seed=" << c.seed << " samples=" << c.samples << "\n";
  for (const auto& s : r.suites) {
    o << "\n== " << s.suite << ": " << (s.passed() ? "pass" : "fail") << " (" << s.count(Verdict::Pass)
      << " pass, " << s.count(Verdict::Fail) << " fail, " << s.count(Verdict::TruncationLimited)
      << " truncation-limited)";
    if (timings) o << " [" << seconds_str(s.seconds) << "]";
    o << "\n";
    for (const auto& k : s.checks) {
      o << "[" << verdict_name(k.verdict) << "] " << k.id << "\n";
      o << "    claim: " << k.anchor << "\n";
      if (!k.precision.empty()) {
        o << "    precision:";
        for (const auto& [key, v] : k.precision) o << " " << key << "=" << v;
        o << "\n";
      }
      for (const auto& [key, v] : k.witnesses) o << "    " << key << ": " << v << "\n";
      for (const auto& n : k.notes) o << "    note: " << n << "\n";
    }
  }
  o << "\nsummary: " << r.count(Verdict::Pass) << " pass, " << r.count(Verdict::Fail) << " fail, "
    << r.count(Verdict::TruncationLimited) << " truncation-limited; exit " << r.exit_code() << "\n";
  return o.str();
}

void write_report(const RunReport& r, const std::string& path, const std::string& format, bool timings) {
  std::string body;
  if (format == "json")
    body = report_to_json(r, timings);
  else if (format == "text")
    body = report_to_text(r, timings);
  else
    throw ReportIOError("unknown report format '" + format + "'");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ReportIOError("cannot open '" + path + "' for writing");
  f << body;
  f.close();
  if (!f) throw ReportIOError("write to '" + path + "' failed");
}

}  // namespace wittcheck
