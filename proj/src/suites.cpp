#include "wittcheck/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "wittcheck/drw.hpp"
#include "wittcheck/kaehler.hpp"
#include "wittcheck/modlinalg.hpp"
#include "wittcheck/tate.hpp"
#include "wittcheck/tilt.hpp"
#include "wittcheck/witt_checks.hpp"

namespace wittcheck {

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Stable per-suite stream: FNV-1a of the id mixed into the seed.
Rng suite_rng(const SuiteConfig& c, const std::string& id) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : id) h = (h ^ ch) * 1099511628211ULL;
  return Rng(c.seed ^ h);
}

// A check that could not run at this configuration.
CheckResult skipped(const std::string& id, const std::string& why) {
  CheckResult r;
  r.id = id;
  r.anchor = "not evaluated at this configuration";
  r.verdict = Verdict::TruncationLimited;
  r.note(why);
  return r;
}

void add_all(CheckReport& rep, const CheckReport& part) { rep.append(part); }

CheckReport witt_identities(const SuiteConfig& c, Rng& rng) {
  CheckReport rep;
  const int max_len = std::min(c.n + 1, c.p == 3 ? 4 : 3);
  for (int len = 1; len <= max_len; ++len)
    rep.add(check_ghost_homomorphism(*universal_table(c.p, len), rng, c.samples));
  const Ring A = Ring::cyclotomic(c.p, c.N, c.M);
  add_all(rep, check_witt_identities(A, c.n, rng, c.samples, c.budget, c.workers));
  add_all(rep, check_witt_identities(Ring::charp(c.p, c.e, c.K), c.n, rng, c.samples, c.budget, c.workers));
  const int nk = std::min(c.n, c.N - 1);
  if (nk >= 1)
    add_all(rep, check_ker_F_generators(A, nk, rng, c.samples, c.budget));
  else
    rep.add(skipped("ker-F", "kernel generators need N >= 2"));
  rep.add(check_witt_units(Ring::cyclotomic(c.p, 1, c.M), c.n, c.budget));
  rep.add(check_zeta_congruence_units(A, c.n, rng, c.samples, c.budget));
  return rep;
}

CheckReport sequences(const SuiteConfig& c, Rng& rng) {
  CheckReport rep;
  ExactnessOptions opt;
  opt.budget = c.budget;
  opt.workers = c.workers;
  opt.samples = c.samples;
  opt.seed = c.seed;
  const Ring A = Ring::cyclotomic(c.p, c.N, c.M);
  try {
    add_all(rep, exactness_report(witt_sequence(A, c.p, c.n), opt));
  } catch (const RingError& e) {
    rep.add(skipped("witt-sequence @ " + A.descriptor(), e.what()));
  }
  for (int n = 1; n <= c.n; ++n) {
    const Ring B = Ring::cyclotomic(c.p, n + 1, 1);
    try {
      add_all(rep, exact_rz_report(B, n, opt));
    } catch (const RingError& e) {
      rep.add(skipped("exact-Rz @ " + B.descriptor() + ", n=" + std::to_string(n), e.what()));
    }
  }
  add_all(rep, check_twisted_module(A, c.n, rng, static_cast<int>(c.samples)));
  // Two restriction steps need Z[zeta_{p^{n+2}}]; one step keeps p > 3 desk-sized.
  const int s_max = c.p == 3 ? 2 : 1;
  add_all(rep, check_witt_intersection(Ring::cyclotomic(c.p, c.n + s_max, 1), c.n, s_max, rng,
                                       static_cast<int>(std::min<uint64_t>(c.samples, 20))));
  return rep;
}

CheckReport kaehler_torsion(const SuiteConfig& c, Rng& rng) {
  CheckReport rep;
  rep.add(check_omega_cyclotomic(c.p, 1));
  if (c.N > 1) rep.add(check_omega_cyclotomic(c.p, c.N));
  rep.add(check_alpha(c.p, std::max(c.N, 2)));
  rep.add(check_omega_torsion_stability(c.p, std::max(c.N, 2), c.M));
  add_all(rep, check_p_surjectivity(Ring::cyclotomic(c.p, c.N, c.M), rng,
                                          static_cast<int>(std::min<uint64_t>(c.samples, 10))));
  rep.add(check_conormal(MonogenicAlgebra::cyclotomic(c.p, c.N)));
  return rep;
}

CheckReport tilt_theta(const SuiteConfig& c, Rng& rng) {
  CheckReport rep;
  add_all(rep, check_theta(Ring::cyclotomic(c.p, c.N, c.M), std::min(c.n, c.T), c.T));
  add_all(rep, check_theta_compatibility(Ring::cyclotomic(c.p, 5, 1), 1, 4, rng,
                                         static_cast<int>(std::min<uint64_t>(c.samples, 20))));
  return rep;
}

CheckReport fixed_points(const SuiteConfig& c, Rng&) {
  const int h = std::clamp(c.N, 2, 3);
  return check_R_fixed_points(Ring::cyclotomic(c.p, h, 1), h, c.n, c.K, 3 * c.K, c.budget);
}

CheckReport qlog(const SuiteConfig& c, Rng&) {
  const int depth = std::max(c.N, 4);
  return check_qlog(c.p, c.K, static_cast<std::size_t>(c.n), Ring::cyclotomic(c.p, depth, 1), depth);
}

CheckReport tate_tower(const SuiteConfig& c, Rng& rng) {
  // Height 3 needs Z[zeta_{p^6}], which is only desk-sized for p = 3.
  const int h = std::clamp(c.n + 1, 2, c.p == 3 ? 3 : 2);
  const Ring A = Ring::cyclotomic(c.p, 2 * h, 1);
  return check_tate_tower(A, h, rng, static_cast<int>(c.samples), c.budget);
}

CheckReport log_presentation(const SuiteConfig& c, Rng&) {
  const Ring A = Ring::cyclotomic(c.p, c.N, c.M);
  return log_presentation_check(A, default_log_tuples(A));
}

CheckReport negative_controls(const SuiteConfig& c, Rng& rng) {
  CheckReport rep;
  const std::string dir = c.fixtures.empty() ? std::string(".") : c.fixtures;
  ExactnessOptions opt;
  opt.budget = c.budget;
  opt.workers = c.workers;
  FiniteComplex broken;
  TableCorruption t;
  try {
    broken = cyclic_complex_from_file(dir + "/broken_complex.json");
    t = table_corruption_from_file(dir + "/corrupted_witt.json");
  } catch (const std::exception& e) {
    throw ConfigError(std::string("negative-control fixtures: ") + e.what());
  }
  add_all(rep, exactness_report(broken, opt));
  CheckResult g = check_ghost_homomorphism(corrupted_table(t), rng, std::max<uint64_t>(c.samples, 10));
  g.id = "corrupted " + g.id;
  rep.add(std::move(g));
  return rep;
}

using SuiteFn = CheckReport (*)(const SuiteConfig&, Rng&);

struct SuiteEntry {
  const char* id;
  SuiteFn fn;
};

const std::vector<SuiteEntry>& registry() {
  static const std::vector<SuiteEntry> r{
      {"witt-identities", witt_identities}, {"sequences", sequences},
      {"kaehler-torsion", kaehler_torsion}, {"tilt-theta", tilt_theta},
      {"fixed-points", fixed_points},       {"qlog", qlog},
      {"tate-tower", tate_tower},           {"log-presentation", log_presentation},
      {"negative-controls", negative_controls},
  };
  return r;
}

}  // namespace

void validate(const SuiteConfig& c) {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (c.p == 2 || !is_prime(c.p)) fail("p must be an odd prime, got " + std::to_string(c.p));
  if (c.p > 7) fail("p must be at most 7 at desk scale, got " + std::to_string(c.p));
  if (c.n < 1 || c.n > 3) fail("n must lie in 1..3, got " + std::to_string(c.n));
  if (c.N < 1 || c.N > 4) fail("N must lie in 1..4, got " + std::to_string(c.N));
  if (c.M < 1 || c.M > 4) fail("M must lie in 1..4, got " + std::to_string(c.M));
  {
    const int m_max = c.p == 3 ? 4 : c.p == 5 ? 2 : 1;
    if (c.M > m_max)
      fail("M must be at most " + std::to_string(m_max) + " for p=" + std::to_string(c.p) + " at desk scale, got " +
           std::to_string(c.M));
  }
  if (c.p <= 7 && c.N >= 1 && c.N <= 4) {
    int64_t degree = c.p - 1;
    for (int i = 1; i < c.N; ++i) degree *= c.p;
    if (degree > 100)
      fail("Z[zeta_{p^N}] of degree " + std::to_string(degree) + " exceeds the desk limit 100; lower N");
  }
  if (c.n > c.N) fail("n <= N is required, got n=" + std::to_string(c.n) + " N=" + std::to_string(c.N));
  if (c.T < 1 || c.T > c.N) fail("1 <= T <= N is required, got T=" + std::to_string(c.T));
  if (c.e < 0 || c.e > 2) fail("e must lie in 0..2, got " + std::to_string(c.e));
  if (c.K < 3 || c.K > 81) fail("K must lie in 3..81, got " + std::to_string(c.K));
  if (c.p <= 7 && c.e >= 0 && c.e <= 2 && c.K * ipow(c.p, c.e) > 729)
    fail("char-p model with K p^e = " + std::to_string(c.K * ipow(c.p, c.e)) + " coefficients exceeds the desk limit 729");
  if (c.budget == 0) fail("budget must be positive");
  if (c.samples == 0) fail("samples must be positive");
  if (c.workers == 0) fail("workers must be positive");
}

const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids{"witt-identities", "sequences", "kaehler-torsion", "tilt-theta",
                                            "fixed-points",    "qlog",      "tate-tower",      "log-presentation"};
  return ids;
}

const std::vector<std::string>& extra_suite_ids() {
  static const std::vector<std::string> ids{"negative-controls"};
  return ids;
}

std::vector<std::string> resolve_suites(const std::vector<std::string>& requested) {
  std::vector<std::string> want;
  for (const auto& r : requested) {
    if (r == "all") {
      want.insert(want.end(), suite_ids().begin(), suite_ids().end());
      continue;
    }
    const bool known = std::find(suite_ids().begin(), suite_ids().end(), r) != suite_ids().end() ||
                       std::find(extra_suite_ids().begin(), extra_suite_ids().end(), r) != extra_suite_ids().end();
    if (!known) throw ConfigError("unknown suite '" + r + "'");
    want.push_back(r);
  }
  std::vector<std::string> out;
  for (const auto& e : registry())
    if (std::find(want.begin(), want.end(), e.id) != want.end()) out.push_back(e.id);
  return out;
}

CheckReport run_suite(const std::string& id, const SuiteConfig& c) {
  for (const auto& e : registry()) {
    if (id != e.id) continue;
    Rng rng = suite_rng(c, id);
    const auto t0 = std::chrono::steady_clock::now();
    CheckReport rep;
    try {
      rep = e.fn(c, rng);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& ex) {
      // An internal error is reported as a failed check, never dropped.
      CheckResult r;
      r.id = "suite-error";
      r.anchor = "the suite ran to completion";
      r.verdict = Verdict::Fail;
      r.witness("error", ex.what());
      rep.add(std::move(r));
    }
    rep.suite = id;
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  }
  throw ConfigError("unknown suite '" + id + "'");
}

std::size_t RunReport::count(Verdict v) const {
  std::size_t n = 0;
  for (const auto& s : suites) n += s.count(v);
  return n;
}

int RunReport::exit_code() const { return count(Verdict::Fail) == 0 ? 0 : 1; }

RunReport run_suites(const SuiteConfig& c, const std::vector<std::string>& suites) {
  validate(c);
  RunReport out;
  out.config = c;
  out.suites.resize(suites.size());
  std::vector<std::exception_ptr> errors(suites.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < suites.size(); i = next++) {
      try {
        out.suites[i] = run_suite(suites[i], c);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(c.workers, static_cast<unsigned>(suites.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace wittcheck
