#include <gmpxx.h>

#include "doctest.h"
#include "wittcheck/witt.hpp"

using namespace wittcheck;

namespace {

// Witt components recovered from ghost components over Q.
std::vector<mpq_class> ghost_inverse(int p, const std::vector<mpq_class>& w) {
  std::vector<mpq_class> a;
  for (std::size_t i = 0; i < w.size(); ++i) {
    mpq_class s = w[i];
    mpz_class pj = 1;
    for (std::size_t j = 0; j < i; ++j) {
      mpz_class e;
      mpz_ui_pow_ui(e.get_mpz_t(), p, i - j);
      mpq_class term = 1;
      for (unsigned long k = 0; k < e.get_ui(); ++k) term *= a[j];
      s -= pj * term;
      pj *= p;
    }
    a.push_back(s / mpq_class(pj));
  }
  return a;
}

std::vector<mpq_class> ghost_of(int p, const std::vector<mpz_class>& a) {
  std::vector<mpq_class> w;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mpz_class s = 0, pj = 1;
    for (std::size_t j = 0; j <= i; ++j) {
      mpz_class pw;
      mpz_class e;
      mpz_ui_pow_ui(e.get_mpz_t(), p, i - j);
      mpz_pow_ui(pw.get_mpz_t(), a[j].get_mpz_t(), e.get_ui());
      s += pj * pw;
      pj *= p;
    }
    w.emplace_back(s);
  }
  return w;
}

IntPoly var(std::size_t nv, std::size_t i) { return IntPoly::variable(nv, i); }

WittVector random_witt(const Ring& R, int p, std::size_t n, Rng& rng) {
  std::vector<Element> c;
  for (std::size_t i = 0; i < n; ++i) c.push_back(R.random_integer(rng, 5));
  return WittVector(R, p, c);
}

}  // namespace

TEST_CASE("universal polynomials: low-order closed forms") {
  auto t1 = build_universal_table(3, 1);
  CHECK(t1.sum[0] == var(2, 0) + var(2, 1));
  CHECK(t1.prod[0] == var(2, 0) * var(2, 1));

  auto t2 = build_universal_table(3, 2);
  const std::size_t nv = 4;
  IntPoly x0 = var(nv, 0), y0 = var(nv, 1), x1 = var(nv, 2), y1 = var(nv, 3);
  CHECK(t2.sum[1] == x1 + y1 - x0 * x0 * y0 - x0 * y0 * y0);
  for (int p : {3, 5, 7}) {
    auto t = build_universal_table(p, 2);
    CHECK(t.prod[1] == x0.pow(p) * y1 + x1 * y0.pow(p) + (x1 * y1).scaled(p));
    CHECK(t.neg[0] == IntPoly(nv) - x0);
    CHECK(t.neg[1] == IntPoly(nv) - x1);
    CHECK(t.frob[0] == IntPoly::variable(2, 0).pow(p) + IntPoly::variable(2, 1).scaled(p));
  }
}

TEST_CASE("universal polynomials agree with rational ghost inversion") {
  Rng rng(2024);
  for (auto [p, n] : std::vector<std::pair<int, int>>{{3, 3}, {5, 3}, {3, 4}}) {
    auto tab = universal_table(p, n);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<mpz_class> x(n), y(n), vals(2 * n);
      for (int i = 0; i < n; ++i) {
        x[i] = static_cast<long>(rng() % 7) - 3;
        y[i] = static_cast<long>(rng() % 7) - 3;
        vals[2 * i] = x[i];
        vals[2 * i + 1] = y[i];
      }
      auto gx = ghost_of(p, x), gy = ghost_of(p, y);
      std::vector<mpq_class> gs(n), gp(n);
      for (int i = 0; i < n; ++i) {
        gs[i] = gx[i] + gy[i];
        gp[i] = gx[i] * gy[i];
      }
      auto s = ghost_inverse(p, gs), m = ghost_inverse(p, gp);
      for (int i = 0; i < n; ++i) {
        CHECK(mpq_class(tab->sum[i].evaluate(vals)) == s[i]);
        CHECK(mpq_class(tab->prod[i].evaluate(vals)) == m[i]);
      }
    }
  }
}

TEST_CASE("integer Witt vectors") {
  auto Z = Ring::integers();
  WittVector one(Z, 3, {Z.from_int(1), Z.from_int(0)});
  auto two = one + one;
  CHECK(two[0].integer() == 2);
  CHECK(two[1].integer() == -2);
  auto g = ghost(two);
  CHECK(g[0].integer() == 2);
  CHECK(g[1].integer() == 2);
  CHECK(WittVector::from_integer(Z, 3, 2, 2) == two);
}

TEST_CASE("ghost map formulas") {
  auto R = Ring::cyclotomic(3, 2, 2);
  Rng rng(4);
  auto a = R.random(rng);
  auto g = ghost(WittVector::teichmuller(a, 3, 3));
  CHECK(g[0] == a);
  CHECK(g[1] == a.pow(3));
  CHECK(g[2] == a.pow(9));
  auto w = random_witt(R, 3, 2, rng);
  auto gv = ghost(verschiebung(w));
  CHECK(gv[0].is_zero());
  CHECK(gv[1] == ghost(w)[0].scaled(3));
  CHECK(gv[2] == ghost(w)[1].scaled(3));
}

TEST_CASE("ghost homomorphism over rings with p-torsion") {
  Rng rng(8);
  for (auto R : {Ring::cyclotomic(3, 2, 3), Ring::charp(3, 1, 2), Ring::integers()}) {
    for (int trial = 0; trial < 50; ++trial) {
      auto u = random_witt(R, 3, 3, rng), v = random_witt(R, 3, 3, rng);
      auto gu = ghost(u), gv = ghost(v), gs = ghost(u + v), gm = ghost(u * v);
      for (int i = 0; i < 3; ++i) {
        CHECK(gs[i] == gu[i] + gv[i]);
        CHECK(gm[i] == gu[i] * gv[i]);
      }
    }
  }
}

TEST_CASE("Witt identities on samples") {
  Rng rng(31);
  auto R = Ring::cyclotomic(3, 2, 2);
  for (int trial = 0; trial < 30; ++trial) {
    auto x = random_witt(R, 3, 3, rng), y = random_witt(R, 3, 2, rng), y3 = random_witt(R, 3, 3, rng);
    auto a = R.random(rng), b = R.random(rng);
    CHECK(x + WittVector::zero(R, 3, 3) == x);
    CHECK(x - x == WittVector::zero(R, 3, 3));
    CHECK(WittVector::teichmuller(a, 3, 3) * WittVector::teichmuller(b, 3, 3) == WittVector::teichmuller(a * b, 3, 3));
    CHECK(frobenius(WittVector::teichmuller(a, 3, 3)) == WittVector::teichmuller(a.pow(3), 3, 2));
    CHECK(frobenius(verschiebung(y)) == scale_integer(y, 3));
    CHECK(x * verschiebung(y) == verschiebung(frobenius(x) * y));
    CHECK(restrict_once(frobenius(x)) == frobenius(restrict_once(x)));
    CHECK(restrict_once(verschiebung(y)) == verschiebung(restrict_once(y)));
    CHECK(verschiebung(y + restrict_once(y3)) == verschiebung(y) + verschiebung(restrict_once(y3)));
    CHECK(verschiebung(y) * verschiebung(restrict_once(y3)) ==
          scale_integer(verschiebung(y * restrict_once(y3)), 3));
    CHECK(frobenius(x * y3) == frobenius(x) * frobenius(y3));
    CHECK(frobenius(x + y3) == frobenius(x) + frobenius(y3));
  }
}

TEST_CASE("z elements") {
  auto R1 = Ring::cyclotomic(3, 1, 2);
  auto z1 = z_element(R1, 1);
  CHECK(z1.is_zero());
  for (int p : {3, 5}) {
    auto R = Ring::cyclotomic(p, 3, 2);
    CHECK(frobenius(z_element(R, 2)).is_zero());
    CHECK(frobenius(z_element(R, 3), 2).is_zero());
    for (std::size_t n = 1; n <= 2; ++n) {
      auto lhs = (WittVector::teichmuller(R.zeta(n + 1), p, n + 1) - WittVector::one(R, p, n + 1)) *
                 z_element(R, static_cast<int>(n + 1));
      auto rhs = WittVector::teichmuller(R.zeta(n), p, n + 1) - WittVector::one(R, p, n + 1);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("Witt division") {
  Rng rng(12);
  auto R = Ring::cyclotomic(3, 2, 1);
  auto d = z_element(R, 2);
  for (int trial = 0; trial < 10; ++trial) {
    auto r = random_witt(R, 3, 2, rng);
    auto res = witt_divide(d * r, d);
    REQUIRE(res.status == DivideStatus::Found);
    CHECK(d * *res.quotient == d * r);
  }
  auto res = witt_divide(WittVector::one(R, 3, 2), d);
  CHECK(res.status == DivideStatus::NoSolution);
}

TEST_CASE("Teichmuller division") {
  auto A = Ring::cyclotomic(3, 1, 3);
  auto x = WittVector::one(A, 3, 1);
  auto r0 = teichmuller_divide(x, A.one(), 3);
  REQUIRE(r0);
  CHECK(r0->N == 0);
  CHECK(r0->quotient == x);
  auto pi = A.zeta(1) - A.one();
  auto r = teichmuller_divide(x, pi, 3);
  REQUIRE(r);
  CHECK(r->N == 1);
  CHECK(WittVector::teichmuller(pi, 3, 1) * r->quotient == WittVector::from_integer(A, 3, 1, 3));
  // The quotient agrees with zeta + 2 zeta^2 up to the annihilator of pi.
  auto diff = r->quotient[0] - (A.zeta(1) + A.zeta(1).pow(2).scaled(2));
  CHECK((pi * diff).is_zero());
  CHECK(r->divisor_is_zero_divisor);
  auto ta = teichmuller_divide(WittVector::teichmuller(pi, 3, 2), pi, 2);
  REQUIRE(ta);
  CHECK(ta->N == 0);
}

TEST_CASE("Witt units are detected by the first coordinate") {
  for (auto A : {Ring::charp(3, 0, 2), Ring::cyclotomic(3, 1, 1)}) {
    const uint64_t n = *A.cardinality();
    std::vector<WittVector> all;
    for (uint64_t i = 0; i < n; ++i)
      for (uint64_t j = 0; j < n; ++j) all.push_back(WittVector(A, 3, {A.element_at(i), A.element_at(j)}));
    for (const auto& w : all) {
      bool has_inverse = false;
      for (const auto& v : all)
        if ((w * v) == WittVector::one(A, 3, 2)) {
          has_inverse = true;
          break;
        }
      CHECK(has_inverse == is_unit(w[0]));
      CHECK(witt_inverse(w).has_value() == has_inverse);
    }
  }
}

TEST_CASE("shape errors") {
  auto R = Ring::cyclotomic(3, 1, 1);
  CHECK_THROWS_AS(WittVector::one(R, 3, 2) + WittVector::one(R, 3, 3), WittError);
  CHECK_THROWS_AS(frobenius(WittVector::one(R, 3, 1)), WittError);
  CHECK_THROWS_AS(build_universal_table(2, 2), RingError);
}
