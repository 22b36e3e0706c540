// Acceptance run: one line per criterion, PASS or FAIL, with wall time.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "wittcheck/drw.hpp"
#include "wittcheck/kaehler.hpp"
#include "wittcheck/suites.hpp"
#include "wittcheck/tate.hpp"
#include "wittcheck/tilt.hpp"
#include "wittcheck/witt_checks.hpp"

using namespace wittcheck;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  // Every check must pass; truncation-limited is allowed only when `allow_tl`.
  void report(const CheckReport& rep, bool allow_tl = false) {
    for (const auto& c : rep.checks) {
      if (c.verdict == Verdict::Fail) require(false, "fail: " + c.id);
      if (c.verdict == Verdict::TruncationLimited && !allow_tl) require(false, "truncation-limited: " + c.id);
    }
  }
  void check(const CheckResult& c) {
    CheckReport r;
    r.add(c);
    report(r);
  }
};

const CheckResult* find_check(const CheckReport& rep, const std::string& prefix) {
  for (const auto& c : rep.checks)
    if (c.id.rfind(prefix, 0) == 0) return &c;
  return nullptr;
}

std::string witness_of(const CheckResult& c, const std::string& key) {
  for (const auto& [k, v] : c.witnesses)
    if (k == key) return v;
  return {};
}

// Plain F_3[x]/(x^6 + x^3 + 1), independent of the library's ring code.
using Poly6 = std::vector<int>;

Poly6 poly_from_index(int idx) {
  Poly6 a(6);
  for (int i = 0; i < 6; ++i, idx /= 3) a[static_cast<std::size_t>(i)] = idx % 3;
  return a;
}

Poly6 poly_mul_phi9(const Poly6& a, const Poly6& b) {
  std::vector<int> r(11, 0);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % 3;
  for (std::size_t d = 10; d >= 6; --d) {
    const int c = r[d];
    r[d] = 0;
    r[d - 3] = (r[d - 3] + 3 - c) % 3;
    r[d - 6] = (r[d - 6] + 3 - c) % 3;
  }
  r.resize(6);
  return r;
}

Outcome criterion1() {
  Outcome o;
  Rng rng(101);
  for (int len = 1; len <= 4; ++len) o.check(check_ghost_homomorphism(*universal_table(3, len), rng, 1000));
  for (int len = 1; len <= 3; ++len) o.check(check_ghost_homomorphism(*universal_table(5, len), rng, 1000));
  return o;
}

Outcome criterion2() {
  Outcome o;
  Rng rng(102);
  const Ring B = Ring::charp(3, 0, 3);
  const uint64_t pairs = 729ULL * 729ULL;
  const auto ex = check_witt_identities(B, 2, rng, 1000, pairs);
  o.report(ex);
  for (const auto& c : ex.checks) {
    bool exhaustive = false;
    for (const auto& [k, v] : c.precision)
      if (k == "mode" && v == "exhaustive") exhaustive = true;
    o.require(exhaustive, c.id + " not exhaustive");
  }
  o.report(check_witt_identities(Ring::cyclotomic(3, 2, 2), 2, rng, 1000, 1000));
  return o;
}

Outcome criterion3() {
  Outcome o;
  ExactnessOptions opt;
  opt.budget = 1000000;
  const std::vector<std::pair<Ring, int>> cases{
      {Ring::charp(3, 0, 3), 1}, {Ring::charp(3, 0, 3), 2}, {Ring::charp(3, 0, 3), 3},
      {Ring::cyclotomic(3, 2, 1), 1}, {Ring::cyclotomic(3, 1, 1), 5}, {Ring::cyclotomic(3, 1, 2), 2},
      {Ring::cyclotomic(5, 1, 1), 1}};
  for (const auto& [A, n] : cases) {
    const auto cx = witt_sequence(A, A.prime(), n);
    for (const auto& s : exactness_slots(cx, opt)) {
      const std::string tag = cx.name + " slot " + std::to_string(s.index);
      o.require(s.exhaustive, tag + " not exhaustive");
      o.require(s.exact(), tag + " not exact");
    }
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  Rng rng(104);
  for (int p : {3, 5})
    for (int n : {1, 2}) {
      const auto rep = check_ker_F_generators(Ring::cyclotomic(p, n + 1, 1), n, rng, 20, 1);
      for (const char* id : {"F^n(z_{n+1})=0", "F(sum [zeta]^i)=0"}) {
        const CheckResult* c = find_check(rep, id);
        o.require(c && c->verdict == Verdict::Pass, std::string(id) + " at p=" + std::to_string(p));
      }
    }
  return o;
}

Outcome criterion5() {
  Outcome o;
  const Ring A = Ring::cyclotomic(3, 2, 1);
  // Oracles: |Ann(1 + x + x^2)| and the Frobenius image size in F_3[x]/Phi_9.
  const Poly6 z0{1, 1, 1, 0, 0, 0};
  uint64_t ann = 0;
  std::set<Poly6> cubes;
  for (int i = 0; i < 729; ++i) {
    const Poly6 a = poly_from_index(i);
    if (poly_mul_phi9(a, z0) == Poly6(6, 0)) ++ann;
    cubes.insert(poly_mul_phi9(poly_mul_phi9(a, a), a));
  }
  const auto cx = exact_rz_sequence(A, 1);
  const auto slots = exactness_slots(cx, {});
  for (const auto& s : slots) {
    const std::string tag = "slot " + std::to_string(s.index);
    o.require(s.exhaustive, tag + " not exhaustive");
    o.require(s.composite_zero, tag + " composite nonzero");
    if (s.exact()) continue;
    if (s.index == 2) {
      o.require(s.kernel_size == s.image_size * ann, tag + " excess differs from |Ann|");
    } else if (s.index == 4) {
      o.require(s.image_size == cubes.size(), tag + " image differs from the Frobenius image");
    } else {
      o.require(false, tag + " not exact");
    }
  }
  o.report(exact_rz_report(A, 1), true);
  return o;
}

Outcome criterion6() {
  Outcome o;
  o.report(check_theta(Ring::cyclotomic(3, 2, 1), 2, 2));
  // xi is evaluated as theta~_1(phi(xi)), see check_theta.
  for (int depth : {2, 3}) {
    const auto xi = xi_element(Ring::cyclotomic(3, 3, 1), depth, 1);
    o.require(theta(xi).is_zero(), "theta(xi) != 0 at depth " + std::to_string(depth));
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  const CheckResult om = check_omega_cyclotomic(3, 1);
  o.check(om);
  // Oracle: |Z[x]/(x^2 + x + 1, 2x + 1)| = |Res| = |2^2 f(-1/2)| = |1 - 2 + 4|.
  o.require(witness_of(om, "order") == std::to_string(1 - 2 + 4), "order differs from the resultant");
  for (int p : {3, 5})
    for (int N : {2, 3}) o.check(check_alpha(p, N));
  o.check(check_omega_torsion_stability(3, 2, 1));
  o.check(check_omega_torsion_stability(3, 2, 2));
  return o;
}

Outcome criterion8() {
  Outcome o;
  Rng rng(108);
  for (int n : {1, 2}) {
    const auto rep = check_twisted_module(Ring::cyclotomic(3, 2, 1), n, rng, 1000);
    o.report(rep);
    o.require(find_check(rep, "V^n(1)-action") != nullptr, "V(1) action missing");
  }
  return o;
}

Outcome criterion9() {
  Outcome o;
  Rng rng(109);
  o.report(check_tate_tower(Ring::cyclotomic(3, 6, 1), 3, rng, 100, 1000000));
  Rng rng2(209);
  o.report(check_tate_tower(Ring::cyclotomic(3, 4, 1), 2, rng2, 100, 1000000));
  return o;
}

Outcome criterion10() {
  Outcome o;
  const auto rep = check_R_fixed_points(Ring::cyclotomic(3, 3, 1), 3, 2, 9, 27, 1000000);
  o.report(rep);
  const auto small = frobenius_equation_solve(3, 9, 1000000);
  o.require(small.exhaustive, "K=9 not exhaustive");
  const auto large = frobenius_equation_solve(3, 27, 1000000);
  o.require(small.claimed.size() == 3 && large.claimed.size() == 3, "claimed set is not {0, t, 2t}");
  o.require(large.spurious_min_order > small.spurious_min_order, "spurious set does not shrink");
  return o;
}

Outcome criterion11() {
  Outcome o;
  o.report(check_qlog(3, 9, 2, Ring::cyclotomic(3, 4, 1), 4));
  return o;
}

Outcome criterion12() {
  Outcome o;
  SuiteConfig c;
  c.fixtures = WITTCHECK_FIXTURES;
  const RunReport run = run_suites(c, {"negative-controls"});
  o.require(run.exit_code() == 1, "exit code is not 1");
  bool complex_fail = false, table_fail = false;
  for (const auto& ch : run.suites.at(0).checks) {
    if (ch.verdict != Verdict::Fail) continue;
    if (ch.witnesses.empty()) o.require(false, "fail without witness: " + ch.id);
    if (ch.id.rfind("corrupted ", 0) == 0)
      table_fail = true;
    else
      complex_fail = true;
  }
  o.require(complex_fail, "broken complex did not fail");
  o.require(table_fail, "corrupted table did not fail");
  return o;
}

struct Criterion {
  int number;
  const char* title;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "ghost homomorphism of the universal Witt polynomials", 30, criterion1},
      {2, "Witt identities, exhaustive over F_3[x]/(x^3) and sampled over cyc(3,2,2)", 60, criterion2},
      {3, "exactness of 0 -> A -> W_{n+1}(A) -> W_n(A) -> 0", 120, criterion3},
      {4, "kernel generators of F^n", 5, criterion4},
      {5, "exact-Rz instance at cyc(3,2,1), n = 1", 300, criterion5},
      {6, "theta~_n([eps]) = [zeta_{p^n}] and theta(xi) = 0", 5, criterion6},
      {7, "Kaehler torsion, alpha identity and torsion stability", 60, criterion7},
      {8, "twisted module axioms and the V(1) action", 60, criterion8},
      {9, "Tate tower transitions, ratio identity and twist law", 60, criterion9},
      {10, "fixed points of R", 300, criterion10},
      {11, "q-logarithm", 30, criterion11},
      {12, "negative controls fail with witnesses", 60, criterion12},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_seconds) o.require(false, "time limit exceeded");
    if (!o.ok) ++failed;
    std::printf("criterion %2d %s (%.2fs / %.0fs) %s%s%s\n", c.number, o.ok ? "PASS" : "FAIL", secs, c.limit_seconds,
                c.title, o.detail.empty() ? "" : ": ", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
