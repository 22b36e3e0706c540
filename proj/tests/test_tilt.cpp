#include "doctest.h"
#include "wittcheck/tilt.hpp"

using namespace wittcheck;

namespace {

void require_all_pass(const CheckReport& rep) {
  for (const auto& c : rep.checks) {
    CAPTURE(c.id);
    for (const auto& n : c.notes) CAPTURE(n);
    CHECK(c.verdict == Verdict::Pass);
  }
}

// Polynomial product over Z/m, truncated to `len` coefficients when len > 0.
std::vector<int64_t> poly_mul(const std::vector<int64_t>& a, const std::vector<int64_t>& b, int64_t m,
                              std::size_t len = 0) {
  std::vector<int64_t> r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % m;
  if (len && r.size() > len) r.resize(len);
  return r;
}

}  // namespace

TEST_CASE("epsilon lifts are the roots of unity") {
  Ring A = Ring::cyclotomic(3, 2, 2);
  auto e = TiltElement::epsilon(A, 2);
  CHECK(e.lift(0) == A.one());
  CHECK(e.lift(1) == A.zeta(1));
  CHECK(e.lift(2) == A.zeta(2));
  CHECK(e.sharp());
  CHECK(TiltElement::epsilon(A, 0).depth() == 0);
  CHECK_THROWS_AS(TiltElement::epsilon(A, 3), TiltError);
  CHECK(e.str().rfind("tilt[depth=2; ", 0) == 0);
}

TEST_CASE("multiplication is coordinatewise") {
  Ring A = Ring::cyclotomic(3, 3, 1);
  auto e = TiltElement::epsilon(A, 3);
  auto e3 = e * tilt_pow(e, 2);
  for (int i = 0; i <= 3; ++i) CHECK(e3.lift(i) == A.zeta(i).pow(uint64_t{3}));
  CHECK(e3 == frobenius_flat(e));
  CHECK(frobenius_flat(e).depth() == 4);
  CHECK(frobenius_flat(e).sharp());
  CHECK(frobenius_flat(e).lift(4) == A.zeta(3));
  // eps^3 has lifts (1, 1, zeta_3, zeta_9).
  CHECK(e3.lift(1) == A.one());
  CHECK(e3.lift(2) == A.zeta(1));
  CHECK(frobenius_flat_inverse(e3) == e.truncated(2));
}

TEST_CASE("tilt addition") {
  Ring A = Ring::cyclotomic(3, 2, 1);
  auto e = TiltElement::epsilon(A, 2);
  auto z = TiltElement::zero(A, 2);
  auto s = tilt_add(e, z, 1);
  CHECK(s == e.truncated(1));
  CHECK(s.sharp());

  // (eps - 1)^(0) at delta = 2 is (zeta_9 - 1)^9 in Z[zeta_9]/(3).
  auto d = tilt_sub(e, TiltElement::one(A, 2), 2);
  CHECK(d.depth() == 0);
  std::vector<int64_t> acc{1};
  for (int k = 0; k < 9; ++k) acc = poly_mul(acc, {2, 1}, 3);  // x - 1 = x + 2 mod 3
  // Reduce mod Phi_9 = x^6 + x^3 + 1.
  for (std::size_t deg = acc.size(); deg-- > 6;) {
    const int64_t c = acc[deg];
    acc[deg] = 0;
    acc[deg - 3] = ((acc[deg - 3] - c) % 3 + 3) % 3;
    acc[deg - 6] = ((acc[deg - 6] - c) % 3 + 3) % 3;
  }
  acc.resize(6);
  CHECK(d.lift(0) == A.from_coeffs(acc));
  CHECK(d.lift(0).is_zero());

  CHECK_THROWS_AS(tilt_add(e.truncated(0), z.truncated(0), 1), TiltError);
}

TEST_CASE("one-shot sums of sharp elements are sharp at delta = M") {
  Ring A = Ring::cyclotomic(3, 4, 2);
  auto e = TiltElement::epsilon(A, 4);
  auto r = tilt_linear_combination(A, 4, {{1, e}, {2, tilt_pow(e, 5)}, {1, TiltElement::one(A, 4)}}, 2);
  CHECK(r.stable);
  CHECK(r.value.depth() == 2);
  CHECK(r.value.sharp());
  CHECK(r.value.compatible());
}

TEST_CASE("theta~ on Teichmuller lifts of eps") {
  require_all_pass(check_theta(Ring::cyclotomic(3, 4, 1), 3, 4));
  require_all_pass(check_theta(Ring::cyclotomic(3, 2, 1), 2, 2));
  Ring A = Ring::cyclotomic(3, 3, 2);
  auto one = TiltWittVector::from_int(A, 3, 2, 1);
  CHECK(theta_tilde(one, 2) == WittVector::one(A, 3, 2));
  auto eps = TiltWittVector::teichmuller(TiltElement::epsilon(A, 3), 1);
  for (int n = 1; n <= 3; ++n) CHECK(theta_tilde(eps, n) == WittVector::teichmuller(A.zeta(n), 3, n));
  CHECK_THROWS_AS(theta_tilde(TiltWittVector::teichmuller(TiltElement::epsilon(A, 1), 1), 2), TiltError);
}

TEST_CASE("xi lies in the kernel of theta") {
  for (auto [p, N] : {std::pair{3, 2}, {3, 4}, {5, 3}}) {
    Ring A = Ring::cyclotomic(p, N, 1);
    auto xi = xi_element(A, N, 1);
    CAPTURE(A.descriptor());
    CHECK(theta(xi).is_zero());
    CHECK(xi[0].sharp());
  }
}

TEST_CASE("theta~ compatibilities and ring-map property") {
  Rng rng(11);
  require_all_pass(check_theta_compatibility(Ring::cyclotomic(3, 5, 1), 1, 4, rng, 10));
  require_all_pass(check_theta_compatibility(Ring::cyclotomic(3, 7, 1), 2, 6, rng, 5));
  require_all_pass(check_theta_compatibility(Ring::cyclotomic(3, 7, 2), 1, 5, rng, 5));
  require_all_pass(check_theta_compatibility(Ring::cyclotomic(3, 6, 2), 1, 4, rng, 3));
  auto shallow = check_theta_compatibility(Ring::cyclotomic(3, 6, 2), 1, 2, rng, 1);
  CHECK(shallow.checks[0].verdict == Verdict::Fail);
  CHECK(!shallow.checks[0].notes.empty());
}

TEST_CASE("Witt operations on the tilt model") {
  Ring A = Ring::cyclotomic(3, 4, 1);
  auto e = TiltWittVector::teichmuller(TiltElement::epsilon(A, 4), 2);
  auto one = TiltWittVector::from_int(A, 4, 2, 1);
  auto two = TiltWittVector::from_int(A, 4, 2, 2);
  CHECK(add(one, one, 1) == two);
  CHECK(sub(e, e, 1).is_zero());
  CHECK(mul(e, one, 1) == e);
  CHECK(add(e, negate(e, 1), 1).is_zero());
  CHECK(witt_frobenius_inverse(witt_frobenius(e)) == e);
  // 3 = V(1) in W_2(F_p)-algebras: coordinates (0, 1).
  auto three = TiltWittVector::from_int(A, 4, 2, 3);
  CHECK(three[0].is_zero());
  CHECK(three[1] == TiltElement::one(A, 4));
}

TEST_CASE("q-logarithm") {
  require_all_pass(check_qlog(3, 6, 2, Ring::cyclotomic(3, 4, 1), 4));

  Ring B = Ring::charp(3, 0, 6);
  auto q = WittVector::teichmuller(B.one() + B.generator(), 3, 2);
  auto one = WittVector::one(B, 3, 2);
  for (int cutoff = 1; cutoff <= 4; ++cutoff) {
    CHECK(q_log(one, q, cutoff).value.is_zero());
    CHECK(q_log(q, q, cutoff).value == q - one);
  }
  auto x = q * q;
  auto r = q_log(x, q, 4);
  CHECK(r.terms.size() == 4);
  CHECK(!r.terms[1].numerator_zero);
  CHECK(r.terms[2].numerator_zero);
  CHECK(r.terms[3].numerator_zero);
  // (x - 1) - (x - 1)(x - q) / (q (1 + q)) with x = q^2.
  CHECK(r.value == (x - one) - (q - one) * (q - one));

  // [3]_q = 21 is not a unit mod 9 and misses the numerator at x = 2, q = 4.
  Ring Z9 = Ring::cyclotomic(3, 1, 2);
  auto q9 = WittVector::teichmuller(Z9.from_int(4), 3, 1);
  auto x9 = WittVector::teichmuller(Z9.from_int(2), 3, 1);
  CHECK_THROWS_WITH_AS(q_log(x9, q9, 3), doctest::Contains("term"), WittError);
}

TEST_CASE("fixed points of y -> y^p / t^(p-1)") {
  // Independent brute force over F_3[t]/(t^9) with plain integer vectors.
  const int K = 9;
  std::vector<std::vector<int64_t>> brute;
  for (int idx = 0; idx < 19683; ++idx) {
    std::vector<int64_t> y(K);
    for (int i = 0, k = idx; i < K; ++i, k /= 3) y[static_cast<std::size_t>(i)] = k % 3;
    auto cube = poly_mul(poly_mul(y, y, 3, K), y, 3, K);
    std::vector<int64_t> rhs(K, 0);
    for (int i = 2; i < K; ++i) rhs[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i - 2)];
    cube.resize(K, 0);
    if (cube == rhs) brute.push_back(y);
  }
  auto s = frobenius_equation_solve(3, K, 100000);
  CHECK(s.exhaustive);
  REQUIRE(s.solutions.size() == brute.size());
  Ring B = Ring::charp(3, 0, K);
  std::vector<Element> expect;
  for (const auto& y : brute) expect.push_back(B.from_coeffs(y));
  for (const auto& y : s.solutions) CHECK(std::find(expect.begin(), expect.end(), y) != expect.end());
  CHECK(s.claimed.size() == 3);
  CHECK(s.spurious_min_order >= (K + 1) / 2);

  auto lin = frobenius_equation_solve(3, 27, 100000);
  CHECK(!lin.exhaustive);
  CHECK(lin.claimed.size() == 3);
  CHECK(lin.spurious_min_order >= 14);
  CHECK(lin.spurious_min_order > s.spurious_min_order);
  // Every reported solution satisfies the equation.
  Ring B27 = Ring::charp(3, 0, 27);
  auto t2 = B27.generator().pow(uint64_t{2});
  for (const auto& y : lin.solutions) CHECK(y.pow(uint64_t{3}) == t2 * y);

  auto rep = check_fixed_points(3, 9, 27, 100000);
  require_all_pass(rep);
}

TEST_CASE("phi on c([eps] - 1)") {
  for (int n = 1; n <= 2; ++n) CHECK(check_phi_identity(3, n, 9).verdict == Verdict::Pass);
  CHECK(check_phi_identity(5, 1, 8).verdict == Verdict::Pass);
}
