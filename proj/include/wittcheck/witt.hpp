#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wittcheck/poly.hpp"
#include "wittcheck/ring.hpp"

namespace wittcheck {

// Universal p-typical Witt polynomials of length n. Sum, product and negation
// polynomials use variables x_i = 2i, y_i = 2i + 1; Frobenius polynomials
// F_0..F_{n-2} use a_i = i and describe F: W_n -> W_{n-1}.
struct WittTable {
  int p = 0;
  int n = 0;
  std::vector<IntPoly> sum;
  std::vector<IntPoly> prod;
  std::vector<IntPoly> neg;
  std::vector<IntPoly> frob;
};

// Ghost recursion over Z; throws std::logic_error on a non-exact division.
WittTable build_universal_table(int p, int n);
// Cached, built once per (p, n).
std::shared_ptr<const WittTable> universal_table(int p, int n);

// w_i = sum_{j<=i} p^j v_j^{p^{i-j}} with v_j = variable index(j).
IntPoly ghost_polynomial(int p, int i, std::size_t nvars, std::size_t stride, std::size_t offset);

enum class WittOp { Sum, Product, Negation, Frobenius };
// Polynomials for an op on length-n vectors (output length n, or n for F
// meaning W_{n+1} -> W_n), reduced for a ring of the given characteristic.
std::shared_ptr<const CompiledPolys> compiled_witt(int p, int n, WittOp op, const mpz_class& characteristic);

class WittError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class WittVector {
 public:
  WittVector() = default;
  WittVector(Ring ring, int p, std::vector<Element> coords);

  static WittVector zero(const Ring& ring, int p, std::size_t n);
  static WittVector one(const Ring& ring, int p, std::size_t n);
  static WittVector from_integer(const Ring& ring, int p, std::size_t n, const mpz_class& c);
  static WittVector teichmuller(const Element& a, int p, std::size_t n);

  const Ring& ring() const { return ring_; }
  int p() const { return p_; }
  std::size_t length() const { return coords_.size(); }
  const std::vector<Element>& coords() const { return coords_; }
  const Element& operator[](std::size_t i) const { return coords_[i]; }
  bool is_zero() const;
  std::string str() const;

  friend bool operator==(const WittVector& a, const WittVector& b);
  friend bool operator!=(const WittVector& a, const WittVector& b) { return !(a == b); }

 private:
  Ring ring_;
  int p_ = 0;
  std::vector<Element> coords_;
};

WittVector operator+(const WittVector& u, const WittVector& v);
WittVector operator*(const WittVector& u, const WittVector& v);
WittVector operator-(const WittVector& u);
WittVector operator-(const WittVector& u, const WittVector& v);

// Same operations against an explicit (possibly altered) table.
WittVector witt_add(const WittVector& u, const WittVector& v, const WittTable& table);
WittVector witt_mul(const WittVector& u, const WittVector& v, const WittTable& table);

std::vector<Element> ghost(const WittVector& w);
WittVector verschiebung(const WittVector& w);          // length n+1
WittVector verschiebung(const WittVector& w, int k);   // V^k
WittVector restrict_once(const WittVector& w);         // length n-1
WittVector restrict_to(const WittVector& w, std::size_t length);
WittVector frobenius(const WittVector& w);             // length n-1
WittVector frobenius(const WittVector& w, int k);      // F^k, length n-k
// c * w computed by repeated Witt addition.
WittVector scale_integer(const WittVector& w, const mpz_class& c);
WittVector power(const WittVector& w, uint64_t e);
std::size_t hash_value(const WittVector& w);

// z_n = 1 + [zeta_{p^n}] + ... + [zeta_{p^n}]^{p-1} as a vector of length `length`.
WittVector z_element(const Ring& ring, int n, std::size_t length);
inline WittVector z_element(const Ring& ring, int n) { return z_element(ring, n, static_cast<std::size_t>(n)); }

enum class DivideStatus { Found, NoSolution, BudgetExhausted };
struct DivideResult {
  DivideStatus status = DivideStatus::NoSolution;
  std::optional<WittVector> quotient;
  uint64_t candidates_tried = 0;
};
// Some c with d * c = x, by first-coordinate peeling with backtracking.
DivideResult witt_divide(const WittVector& x, const WittVector& d, uint64_t budget = 100000);

struct TeichmullerDivision {
  int N = 0;
  WittVector quotient;
  bool divisor_is_zero_divisor = false;
};
// Minimal N <= n_max with [a] * q = p^N * x, and such a q.
std::optional<TeichmullerDivision> teichmuller_divide(const WittVector& x, const Element& a, int n_max,
                                                      uint64_t budget = 100000);

// Unit test in W_n(A) by solving w * v = 1.
std::optional<WittVector> witt_inverse(const WittVector& w, uint64_t budget = 100000);

}  // namespace wittcheck
