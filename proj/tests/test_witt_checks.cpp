#include "doctest.h"
#include "wittcheck/witt_checks.hpp"

using namespace wittcheck;

namespace {

void require_all_pass(const CheckReport& rep) {
  for (const auto& c : rep.checks) {
    CAPTURE(c.id);
    CHECK(c.verdict == Verdict::Pass);
  }
}

}  // namespace

TEST_CASE("ghost homomorphism over Z for the universal tables") {
  Rng rng(1);
  for (auto [p, n] : {std::pair{3, 1}, {3, 2}, {3, 3}, {5, 1}, {5, 2}}) {
    auto r = check_ghost_homomorphism(*universal_table(p, n), rng, 200);
    CAPTURE(r.id);
    CHECK(r.verdict == Verdict::Pass);
  }
}

TEST_CASE("a corrupted table fails the ghost check with a witness") {
  auto c = table_corruption_from_file(std::string(WITTCHECK_FIXTURES) + "/corrupted_witt.json");
  CHECK(c.p == 3);
  CHECK(c.n == 2);
  Rng rng(1);
  auto r = check_ghost_homomorphism(corrupted_table(c), rng, 100);
  CHECK(r.verdict == Verdict::Fail);
  bool has_u = false;
  for (const auto& [k, v] : r.witnesses) has_u = has_u || k == "u";
  CHECK(has_u);
  // The clean table passes on the same draws.
  Rng rng2(1);
  CHECK(check_ghost_homomorphism(*universal_table(3, 2), rng2, 100).verdict == Verdict::Pass);
}

TEST_CASE("corruption fixtures are validated") {
  CHECK_THROWS(table_corruption_from_json(R"({"p":3,"n":2,"polynomial":"bogus","index":0,"monomial":[1]})"));
  CHECK_THROWS(corrupted_table(table_corruption_from_json(
      R"({"p":3,"n":2,"polynomial":"sum","index":5,"monomial":[1]})")));
}

TEST_CASE("Witt identities exhaustive over F_3[t]/(t^3), n = 2") {
  Rng rng(3);
  auto rep = check_witt_identities(Ring::charp(3, 0, 3), 2, rng, 100, 1000000);
  require_all_pass(rep);
  CHECK(rep.checks.size() == 10);
  for (const auto& c : rep.checks) {
    bool exhaustive = false;
    for (const auto& [k, v] : c.precision) exhaustive = exhaustive || (k == "mode" && v == "exhaustive");
    CHECK(exhaustive);
  }
}

TEST_CASE("Witt identities sampled over cyc(3,2,2) and cyc(5,2,1)") {
  Rng rng(4);
  require_all_pass(check_witt_identities(Ring::cyclotomic(3, 2, 2), 2, rng, 40, 1000000));
  require_all_pass(check_witt_identities(Ring::cyclotomic(5, 2, 1), 2, rng, 10, 1000000));
}

TEST_CASE("kernel generators of F") {
  Rng rng(5);
  for (auto [p, N, M, n] : {std::tuple{3, 2, 1, 1}, {3, 3, 1, 2}, {3, 2, 2, 1}, {5, 2, 1, 1}}) {
    Ring A = Ring::cyclotomic(p, N, M);
    auto rep = check_ker_F_generators(A, n, rng, 5, 100000);
    CAPTURE(A.descriptor());
    for (const auto& c : rep.checks) {
      CAPTURE(c.id);
      CHECK(c.verdict != Verdict::Fail);
    }
    CHECK(rep.checks[0].verdict == Verdict::Pass);
    CHECK(rep.checks[1].verdict == Verdict::Pass);
  }
}

TEST_CASE("units in W_n are detected by the first coordinate") {
  // F_3[t]/(t^3) has 18 units, so W_2 has 18 * 27 units.
  auto r = check_witt_units(Ring::charp(3, 0, 3), 2, 1000000);
  CHECK(r.verdict == Verdict::Pass);
  bool count_ok = false;
  for (const auto& [k, v] : r.witnesses) count_ok = count_ok || (k == "units" && v == "486");
  CHECK(count_ok);
  CHECK(check_witt_units(Ring::cyclotomic(3, 1, 2), 1, 1000000).verdict == Verdict::Pass);
}

TEST_CASE("zeta congruence forces a unit first coordinate") {
  Rng rng(6);
  CHECK(check_zeta_congruence_units(Ring::cyclotomic(3, 1, 2), 1, rng, 0, 1000000).verdict == Verdict::Pass);
  CHECK(check_zeta_congruence_units(Ring::cyclotomic(3, 2, 2), 2, rng, 20, 1000).verdict == Verdict::Pass);
}
