#include "doctest.h"
#include "wittcheck/tate.hpp"

using namespace wittcheck;

namespace {

void require_all_pass(const CheckReport& rep) {
  for (const auto& c : rep.checks) {
    CAPTURE(c.id);
    for (const auto& n : c.notes) CAPTURE(n);
    CHECK(c.verdict == Verdict::Pass);
  }
}

}  // namespace

TEST_CASE("dlog elements and transitions") {
  Ring A = Ring::cyclotomic(3, 3, 1);
  auto d1 = dlog_element(A, 1);
  CHECK(d1.level() == 1);
  CHECK(d1.scalar()[0] == A.zeta(1) - A.one());
  CHECK(tate_F(dlog_element(A, 2)) == d1);
  CHECK(tate_R(dlog_element(A, 2)) == d1);
  CHECK(tate_R(tate_alpha(A, 2)).scalar()[0] == A.one() + A.zeta(2) + A.zeta(2).pow(uint64_t{2}));
  CHECK_THROWS_AS(dlog_element(A, 4), TateError);
  CHECK_THROWS_AS(tate_F(d1), TateError);
}

TEST_CASE("towers must be F-compatible") {
  Ring A = Ring::cyclotomic(3, 3, 1);
  CHECK_NOTHROW(dlog_tower(A, 3));
  CHECK_THROWS_AS(TateTower({tate_alpha(A, 1), dlog_element(A, 2)}), TateError);
  CHECK_THROWS_AS(TateTower({tate_alpha(A, 2)}), TateError);
  CHECK(tower_restrict(dlog_tower(A, 3)) == dlog_tower(A, 2));
}

TEST_CASE("R commutes with p") {
  Ring A = Ring::cyclotomic(3, 3, 2);
  Rng rng(2);
  std::vector<Element> c{A.random(rng), A.random(rng), A.random(rng)};
  auto x = tower_from_top(WittVector(A, 3, c));
  auto px = tower_act(TiltWittVector::from_int(A, 6, 3, 3), x);
  for (int n = 1; n <= 3; ++n) CHECK(px.layer(n).scalar() == scale_integer(x.layer(n).scalar(), mpz_class(3)));
  auto r = tower_restrict(px);
  auto rx = tower_restrict(x);
  for (int n = 1; n <= 2; ++n) CHECK(r.layer(n).scalar() == scale_integer(rx.layer(n).scalar(), mpz_class(3)));
}

TEST_CASE("Tate tower checks") {
  Rng rng(8);
  require_all_pass(check_tate_tower(Ring::cyclotomic(3, 6, 1), 3, rng, 10, 100000));
  require_all_pass(check_tate_tower(Ring::cyclotomic(3, 4, 1), 2, rng, 10, 100000));
  require_all_pass(check_tate_tower(Ring::cyclotomic(5, 4, 1), 2, rng, 3, 100000));
  // At M = 2 the xi and q-log cross-checks run out of tilt depth.
  for (const auto& c : check_tate_tower(Ring::cyclotomic(3, 5, 2), 2, rng, 3, 100000).checks) {
    CAPTURE(c.id);
    CHECK(c.verdict != Verdict::Fail);
  }
  CHECK_THROWS_AS(check_tate_tower(Ring::cyclotomic(3, 3, 1), 2, rng, 1, 100000), TateError);
}

TEST_CASE("freeness") {
  CHECK(check_tate_freeness(Ring::cyclotomic(3, 1, 1), 2, 100000).verdict == Verdict::Pass);
  CHECK(check_tate_freeness(Ring::cyclotomic(3, 2, 1), 1, 100000).verdict == Verdict::Pass);
  CHECK(check_tate_freeness(Ring::cyclotomic(3, 2, 1), 2, 1000).verdict == Verdict::TruncationLimited);
}

TEST_CASE("fixed points of R") {
  auto rep = check_R_fixed_points(Ring::cyclotomic(3, 4, 1), 3, 2, 9, 27, 100000);
  require_all_pass(rep);
  bool has_cases = false;
  for (const auto& c : rep.checks)
    for (const auto& [k, v] : c.precision) has_cases = has_cases || (k == "cases" && v == "9");
  CHECK(has_cases);
}
