#include <numeric>
#include <set>

#include "doctest.h"
#include "wittcheck/drw.hpp"

using namespace wittcheck;

namespace {

std::string cyclic_json(const std::vector<uint64_t>& groups, const std::vector<uint64_t>& maps) {
  std::string s = "{\"name\":\"t\",\"groups\":[";
  for (std::size_t i = 0; i < groups.size(); ++i) s += (i ? "," : "") + std::to_string(groups[i]);
  s += "],\"maps\":[";
  for (std::size_t i = 0; i < maps.size(); ++i) s += (i ? "," : "") + std::to_string(maps[i]);
  return s + "]}";
}

// Image and kernel of x -> c x from Z/a to Z/b by direct set construction.
std::set<uint64_t> image_set(uint64_t a, uint64_t c, uint64_t b) {
  std::set<uint64_t> s;
  for (uint64_t x = 0; x < a; ++x) s.insert(c * x % b);
  return s;
}
std::set<uint64_t> kernel_set(uint64_t a, uint64_t c, uint64_t b) {
  std::set<uint64_t> s;
  for (uint64_t x = 0; x < a; ++x)
    if (c * x % b == 0) s.insert(x);
  return s;
}

}  // namespace

TEST_CASE("cyclic complexes match set-based kernels and images") {
  Rng rng(7);
  const uint64_t orders[] = {1, 2, 3, 4, 6, 8, 9, 12, 27};
  int built = 0;
  while (built < 200) {
    std::vector<uint64_t> g(4);
    for (auto& x : g) x = orders[rng() % 9];
    std::vector<uint64_t> m(3);
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      std::vector<uint64_t> legal;
      for (uint64_t c = 0; c < g[i + 1]; ++c)
        if (c * g[i] % g[i + 1] == 0) legal.push_back(c);
      m[i] = legal[rng() % legal.size()];
      ok = ok && !legal.empty();
    }
    if (!ok) continue;
    ++built;
    auto cx = cyclic_complex_from_json(cyclic_json(g, m));
    auto slots = exactness_slots(cx, {.workers = 1});
    REQUIRE(slots.size() == 2);
    for (const auto& v : slots) {
      const std::size_t i = v.index;
      auto im = image_set(g[i - 1], m[i - 1], g[i]);
      auto ker = kernel_set(g[i], m[i], g[i + 1]);
      CHECK(v.image_size == im.size());
      CHECK(v.kernel_size == ker.size());
      const bool composite = std::includes(ker.begin(), ker.end(), im.begin(), im.end());
      CHECK(v.composite_zero == composite);
      std::optional<uint64_t> first;
      for (uint64_t y : ker)
        if (!im.count(y)) {
          first = y;
          break;
        }
      CHECK(v.exactness_witness == first);
    }
  }
}

TEST_CASE("ill-defined cyclic maps are rejected") {
  CHECK_THROWS(cyclic_complex_from_json(cyclic_json({3, 9}, {1})));
  CHECK_THROWS(cyclic_complex_from_json(cyclic_json({3, 9, 1}, {3})));
}

TEST_CASE("shipped broken complex fails at the middle slot") {
  auto cx = cyclic_complex_from_file(std::string(WITTCHECK_FIXTURES) + "/broken_complex.json");
  auto rep = exactness_report(cx);
  CHECK_FALSE(rep.passed());
  auto slots = exactness_slots(cx);
  REQUIRE(slots.size() == 3);
  CHECK(slots[0].exact());
  CHECK_FALSE(slots[1].exact());
  CHECK(slots[1].kernel_size == 9);
  CHECK(slots[1].image_size == 3);
  CHECK(slots[1].exactness_witness == 3u);
  CHECK(slots[2].exact());
  bool saw = false;
  for (const auto& c : rep.checks)
    for (const auto& [k, v] : c.witnesses)
      if (k == "kernel element outside image" && v == "3") saw = true;
  CHECK(saw);
}

TEST_CASE("Witt carrier indexing round-trips") {
  Ring A = Ring::cyclotomic(3, 1, 2);
  auto car = witt_carrier(A, 3, 2);
  CHECK(car.size == 81 * 81);
  for (uint64_t i : {0ull, 1ull, 80ull, 81ull, 6560ull, 1234ull}) CHECK(witt_index(witt_at(A, 3, 2, i)) == i);
  CHECK(witt_at(A, 3, 2, car.zero).is_zero());
}

TEST_CASE("Witt sequence is exact exhaustively") {
  std::vector<std::pair<Ring, int>> cases = {
      {Ring::charp(3, 0, 3), 1}, {Ring::charp(3, 0, 3), 2}, {Ring::cyclotomic(3, 1, 1), 1},
      {Ring::cyclotomic(3, 1, 1), 2}, {Ring::cyclotomic(3, 1, 2), 1}, {Ring::cyclotomic(3, 1, 2), 2},
      {Ring::product({Ring::charp(3, 0, 1), Ring::cyclotomic(3, 1, 1)}), 2}};
  for (const auto& [A, n] : cases) {
    CAPTURE(A.descriptor());
    CAPTURE(n);
    auto cx = witt_sequence(A, 3, n);
    auto slots = exactness_slots(cx);
    REQUIRE(slots.size() == 3);
    const uint64_t a = *A.cardinality();
    for (const auto& v : slots) {
      CHECK(v.exhaustive);
      CHECK(v.exact());
    }
    // V^n injective, R surjective: every kernel has the size of the previous carrier.
    CHECK(slots[0].kernel_size == 1);
    CHECK(slots[1].kernel_size == a);
    CHECK(slots[2].image_size == cx.carriers[3].size);
  }
}

TEST_CASE("exact-Rz over cyc(3,2,1), n=1") {
  Ring A = Ring::cyclotomic(3, 2, 1);
  auto slots = exactness_slots(exact_rz_sequence(A, 1));
  REQUIRE(slots.size() == 4);
  CHECK(slots[0].exact());
  CHECK(slots[1].composite_zero);
  CHECK(slots[1].image_size == 729);
  CHECK(slots[1].kernel_size == 6561);
  CHECK(slots[2].exact());
  CHECK(slots[2].kernel_size == 81);
  // F on W_1 = A is the p-th power map; over F_3[u]/u^6 its image is F_3[u^3]/u^6.
  CHECK(slots[3].image_size == 9);

  // (z_2)_0 = 1 + zeta_9 + zeta_9^2 is a unit multiple of u^2 with u = zeta_9 - 1,
  // so its annihilator in F_3[u]/u^6 is u^4 F_3[u], of order 9.
  auto rep = exact_rz_report(A, 1);
  REQUIRE(rep.checks.size() == 4);
  CHECK(rep.checks[0].verdict == Verdict::Pass);
  CHECK(rep.checks[1].verdict == Verdict::TruncationLimited);
  CHECK(rep.checks[2].verdict == Verdict::Pass);
  CHECK(rep.checks[3].verdict == Verdict::TruncationLimited);
  CHECK(rep.passed());
}

TEST_CASE("exact-Rz sampled mode checks composites only") {
  Ring A = Ring::cyclotomic(3, 2, 2);
  auto slots = exactness_slots(exact_rz_sequence(A, 1), {.budget = 1000, .samples = 50});
  for (const auto& v : slots) {
    CHECK_FALSE(v.exhaustive);
    CHECK(v.composite_zero);
  }
}

TEST_CASE("twisted module axioms") {
  Rng rng(11);
  for (auto [p, N, M, n] : {std::tuple{3, 2, 2, 1}, {3, 3, 2, 2}, {5, 2, 2, 1}, {3, 2, 3, 1}}) {
    Ring A = Ring::cyclotomic(p, N, M);
    auto rep = check_twisted_module(A, n, rng, 10);
    CAPTURE(A.descriptor());
    for (const auto& c : rep.checks) {
      CAPTURE(c.id);
      CHECK(c.verdict == Verdict::Pass);
    }
    CHECK(rep.checks.size() == 5);
  }
}

TEST_CASE("twisted module: V^n(1) on a fixed element") {
  Ring A = Ring::cyclotomic(3, 2, 2);
  TwistedModule T(A, 1);
  TwistedModule::Elem m{T.omega().dx(), A.one()};
  WittVector v1(A, 3, {A.zero(), A.one()});
  auto r = T.act(v1, m);
  CHECK(r.a == A.from_int(3));
  CHECK(T.omega().equal(r.alpha, T.omega().scale(T.omega().dx(), 3)));
}

TEST_CASE("restricted z and the Witt intersection") {
  Ring A = Ring::cyclotomic(3, 4, 1);
  Rng rng(5);
  auto rep = check_witt_intersection(A, 1, 3, rng, 4);
  for (const auto& c : rep.checks) {
    CAPTURE(c.id);
    CHECK(c.verdict == Verdict::Pass);
  }
  // In W_1 the restriction of z_{1+s} is its first coordinate.
  for (int s = 1; s <= 3; ++s) {
    Element c = A.zeta(1 + s);
    CHECK(restricted_z(A, 1, s)[0] == A.one() + c + c * c);
  }
}

TEST_CASE("divisibility by [zeta_3]-1 agrees with enumeration") {
  Ring A = Ring::cyclotomic(3, 2, 1);
  const WittVector base(A, 3, {A.zeta(1) - A.one()});
  std::set<uint64_t> multiples;
  for (uint64_t i = 0; i < 729; ++i) multiples.insert(A.index_of((A.zeta(1) - A.one()) * A.element_at(i)));
  CHECK(multiples.size() == 27);
  for (uint64_t i = 0; i < 729; i += 7) {
    WittVector x(A, 3, {A.element_at(i)});
    auto d = witt_divide(x, base);
    CHECK((d.status == DivideStatus::Found) == (multiples.count(i) > 0));
  }
  CHECK_FALSE(multiples.count(A.index_of(A.one())));
}
