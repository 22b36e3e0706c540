#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wittcheck {

using Rng = std::mt19937_64;

enum class RingKind { Integers, Cyclotomic, CharP, Product };

class Element;

namespace detail {
struct RingImpl;
}

// Rejects p = 2 and composites.
void require_odd_prime(int p);

// Exact commutative ring: Z, Z[x]/(Phi_{p^N}, p^M), F_p[s]/(s^{K p^e}) or a
// finite product. Handles are cheap to copy and immutable.
class Ring {
 public:
  Ring() = default;

  static Ring integers();
  static Ring cyclotomic(int p, int N, int M);
  static Ring charp(int p, int e, int K);
  static Ring product(std::vector<Ring> factors);
  // Inverse of descriptor(): "Z", "cyc(3,2,2)", "charp(3,0,9)", "prod(...)".
  static Ring parse(std::string_view descriptor);

  RingKind kind() const;
  int prime() const;  // 0 for Z; the common prime for products, or 0
  int depth() const;  // N for cyclotomic, e for charp
  int precision() const;  // M for cyclotomic, K for charp
  int64_t modulus() const;  // coefficient modulus (p^M or p); 0 for Z
  std::size_t rank() const;  // number of stored coefficients
  const std::vector<Ring>& factors() const;
  // Additive exponent: smallest c with c*1 = 0, or 0 for Z.
  mpz_class characteristic() const;
  std::optional<uint64_t> cardinality() const;
  bool finite() const { return kind() != RingKind::Integers; }
  const std::string& descriptor() const;
  // Coefficients of Phi_{p^N}, low degree first.
  std::vector<int64_t> minimal_polynomial() const;

  Element zero() const;
  Element one() const;
  Element from_int(int64_t v) const;
  Element from_mpz(const mpz_class& v) const;
  // Reduces arbitrary integer coefficients into canonical form.
  Element from_coeffs(const std::vector<int64_t>& c) const;
  Element from_parts(std::vector<Element> parts) const;
  // z (cyclotomic) or t (charp).
  Element generator() const;
  // zeta_{p^n} = z^{p^{N-n}}, 0 <= n <= N.
  Element zeta(int n) const;
  // t^{1/p^k} = s^{p^{e-k}}, 0 <= k <= e.
  Element t_root(int k) const;

  Element element_at(uint64_t index) const;
  uint64_t index_of(const Element& a) const;
  Element random(Rng& rng) const;
  // Uniform in [-bound, bound] for Z, uniform over the ring otherwise.
  Element random_integer(Rng& rng, int64_t bound) const;

  Element parse_element(std::string_view text) const;

  bool operator==(const Ring& o) const;
  bool operator!=(const Ring& o) const { return !(*this == o); }

  const detail::RingImpl* impl() const { return impl_.get(); }

 private:
  explicit Ring(std::shared_ptr<const detail::RingImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const detail::RingImpl> impl_;
  friend class Element;
};

class Element {
 public:
  Element() = default;

  const Ring& ring() const { return ring_; }
  const std::vector<int64_t>& coeffs() const { return c_; }
  const mpz_class& integer() const { return z_; }
  const std::vector<Element>& parts() const { return parts_; }

  bool is_zero() const;
  bool is_one() const;
  std::string str() const;

  friend Element operator+(const Element& a, const Element& b);
  friend Element operator-(const Element& a, const Element& b);
  friend Element operator*(const Element& a, const Element& b);
  friend Element operator-(const Element& a);
  friend bool operator==(const Element& a, const Element& b);
  friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }
  Element& operator+=(const Element& b) { return *this = *this + b; }
  Element& operator-=(const Element& b) { return *this = *this - b; }
  Element& operator*=(const Element& b) { return *this = *this * b; }

  Element scaled(const mpz_class& c) const;
  Element pow(const mpz_class& e) const;
  Element pow(uint64_t e) const { return pow(mpz_class(static_cast<unsigned long>(e))); }

  // Lexicographic order on canonical coordinates.
  friend bool operator<(const Element& a, const Element& b);

 private:
  friend class Ring;
  Ring ring_;
  std::vector<int64_t> c_;
  mpz_class z_;
  std::vector<Element> parts_;
};

std::size_t hash_value(const Element& a);

struct ElementHash {
  std::size_t operator()(const Element& a) const { return hash_value(a); }
};

// Some c with b*c = a, or nothing.
std::optional<Element> divide_exact(const Element& a, const Element& b);

// Inverse when a is a unit.
std::optional<Element> inverse(const Element& a);
inline bool is_unit(const Element& a) { return inverse(a).has_value(); }

// All solutions of b*c = a: particular + span of generators, where generator i
// has additive order orders[i]. Empty optional when unsolvable.
struct AffineSolutions {
  Element particular;
  std::vector<Element> generators;
  std::vector<uint64_t> orders;
  // Count of distinct solutions, saturating at UINT64_MAX.
  uint64_t count() const;
  // Deterministic enumeration of solution number idx < count().
  Element at(uint64_t idx) const;
};
std::optional<AffineSolutions> solve_multiplication(const Element& a, const Element& b);

// Ring map Z[x]/(Phi_{p^N}, p^M) -> Z[x]/(Phi_{p^{N+s}}, p^M), z -> z^{p^s}.
Element embed_cyclotomic(const Element& a, const Ring& target);

// Reduction mod p of a cyclotomic element into cyc(p,N,1).
Element reduce_mod_p(const Element& a);

class RingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace wittcheck
