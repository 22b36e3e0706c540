#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wittcheck/report.hpp"
#include "wittcheck/witt.hpp"

namespace wittcheck {

class TiltError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Element of the tilt at finite depth: lifts t^(0), ..., t^(T) in A with
// (t^(i+1))^p = t^(i) mod p. Lifts built by the operations below are sharp,
// i.e. exactly p-power compatible in A.
class TiltElement {
 public:
  TiltElement() = default;
  TiltElement(Ring base, std::vector<Element> lifts);

  static TiltElement zero(const Ring& base, int depth);
  static TiltElement one(const Ring& base, int depth);
  // Image of an integer: lifts are the Teichmuller representative of c mod p.
  static TiltElement from_int(const Ring& base, int depth, int64_t c);
  // (1, zeta_p, ..., zeta_{p^T}).
  static TiltElement epsilon(const Ring& cyc, int depth);

  const Ring& base() const { return base_; }
  int prime() const { return base_.prime(); }
  int depth() const { return static_cast<int>(lifts_.size()) - 1; }
  const Element& lift(int i) const { return lifts_.at(static_cast<std::size_t>(i)); }
  const std::vector<Element>& lifts() const { return lifts_; }

  // Compatibility mod p (the defining invariant).
  bool compatible() const;
  // Exact compatibility in A.
  bool sharp() const;
  // Zero in the tilt: every lift vanishes mod p.
  bool is_zero() const;
  TiltElement truncated(int depth) const;
  std::string str() const;

  // Equality in the tilt at the common depth (lifts agree mod p).
  friend bool operator==(const TiltElement& a, const TiltElement& b);
  friend bool operator!=(const TiltElement& a, const TiltElement& b) { return !(a == b); }
  // Coordinatewise product at the common depth.
  friend TiltElement operator*(const TiltElement& a, const TiltElement& b);

 private:
  Ring base_;
  std::vector<Element> lifts_;
};

TiltElement tilt_pow(const TiltElement& t, uint64_t e);
// t -> t^p. Sharp inputs gain a level: (t^(0)^p, t^(0), ..., t^(T)); others
// are raised coordinatewise at depth T.
TiltElement frobenius_flat(const TiltElement& t);
// t -> t^{1/p}: lifts shift down by one; depth drops by one.
TiltElement frobenius_flat_inverse(const TiltElement& t);

// Default depth loss for additions: min(M, 3).
int default_tilt_delta(const Ring& base);

struct TiltSum {
  TiltElement value;  // depth - delta
  bool stable = true; // k = delta and k = delta - 1 approximants agree mod p^{min(M, delta)}
};
// sum_j c_j t_j in one step: (sum_j w(c_j) t_j^(i+delta))^{p^delta}.
TiltSum tilt_linear_combination(const Ring& base, int depth,
                                const std::vector<std::pair<mpz_class, TiltElement>>& terms, int delta);
// s + t with depth loss delta; throws TiltError if the stabilization check fails.
TiltElement tilt_add(const TiltElement& s, const TiltElement& t, int delta);
TiltElement tilt_sub(const TiltElement& s, const TiltElement& t, int delta);

// Truncated W(A^flat): length L, coordinates at a common depth. Ring
// operations evaluate the universal polynomials in characteristic p, each
// costing delta levels of depth.
class TiltWittVector {
 public:
  TiltWittVector() = default;
  explicit TiltWittVector(std::vector<TiltElement> coords);

  static TiltWittVector teichmuller(const TiltElement& t, std::size_t length);
  static TiltWittVector from_int(const Ring& base, int depth, std::size_t length, int64_t c);

  std::size_t length() const { return coords_.size(); }
  const TiltElement& operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<TiltElement>& coords() const { return coords_; }
  const Ring& base() const { return coords_.front().base(); }
  int prime() const { return coords_.front().prime(); }
  // Minimum depth over all coordinates.
  int depth() const;
  bool is_zero() const;
  std::string str() const;

  friend bool operator==(const TiltWittVector& a, const TiltWittVector& b);
  friend bool operator!=(const TiltWittVector& a, const TiltWittVector& b) { return !(a == b); }

 private:
  std::vector<TiltElement> coords_;
};

TiltWittVector add(const TiltWittVector& u, const TiltWittVector& v, int delta);
TiltWittVector sub(const TiltWittVector& u, const TiltWittVector& v, int delta);
TiltWittVector mul(const TiltWittVector& u, const TiltWittVector& v, int delta);
TiltWittVector negate(const TiltWittVector& u, int delta);
// Witt Frobenius of the perfect ring: frobenius_flat on every coordinate.
TiltWittVector witt_frobenius(const TiltWittVector& w);
// Its inverse: coordinatewise p-th root (depth drops by one).
TiltWittVector witt_frobenius_inverse(const TiltWittVector& w);

// Random sharp element at the given depth: one-shot sum of c * eps^{a/p^s}.
TiltElement random_sharp(const Ring& cyc, int depth, int delta, Rng& rng);
TiltWittVector random_tilt_vector(const Ring& cyc, int depth, std::size_t length, Rng& rng);

// theta~_r(w) = sum_i p^i [w_i^(r+i)] in W_r(A). Coordinates with p^i = 0 in
// W_r(A) are skipped.
WittVector theta_tilde(const TiltWittVector& w, int r);
// theta = theta~_1 composed with the Witt Frobenius, valued in A.
Element theta(const TiltWittVector& w);

// xi = 1 + [eps^{1/p}] + ... + [eps^{1/p}]^{p-1} of the given length.
TiltWittVector xi_element(const Ring& cyc, int depth, std::size_t length);

// theta~_n([eps]) = [zeta_{p^n}] for n = 1..n_max, theta(xi) = 0, and the
// literal value of theta~_1(xi).
CheckReport check_theta(const Ring& cyc, int n_max, int depth);
// F theta~_{r+1} = theta~_r, R theta~_{r+1} phi = theta~_r, and theta~_r
// additive and multiplicative on sampled sharp pairs.
CheckReport check_theta_compatibility(const Ring& cyc, int r, int depth, Rng& rng, int samples);

// log_q(x) = sum_{n=1}^{cutoff} (-1)^{n-1} q^{-n(n-1)/2} (x-1)(x-q)...(x-q^{n-1}) / [n]_q.
struct QLogTerm {
  int n = 0;
  bool numerator_zero = false;
  bool divided = false;
  uint64_t candidates = 0;
  WittVector value;
};
struct QLogResult {
  WittVector value;
  std::vector<QLogTerm> terms;
};
// Over W_L(B) for a finite ring B, with q a unit. Throws WittError naming the
// term when [n]_q does not divide the numerator within budget.
QLogResult q_log(const WittVector& x, const WittVector& q, int cutoff, uint64_t budget = 200000);
// Over the tilt model: terms whose numerator has a vanishing factor are zero;
// other terms are supported only when [n]_q = 1.
TiltWittVector q_log_tilt(const TiltWittVector& x, const TiltWittVector& q, int cutoff, int delta);

// log_q([eps]) = [eps] - 1 over the tilt model and the char-p model, and
// q_log at x = [eps^2] over W_L(F_p[t]/t^K) with q = [1 + t]: every term up to
// cutoff 5 divides, cutoffs 3 and 4 agree.
CheckReport check_qlog(int p, int K, std::size_t length, const Ring& cyc, int depth);

// Solutions of y^p = t^{p-1} y in F_p[t]/(t^K) (epsilon = 1 + t): exhaustive
// for p^K <= budget, F_p-linear algebra otherwise.
struct FixedPointSet {
  int p = 0;
  int K = 0;
  bool exhaustive = false;
  // Listed only when the count fits the budget; the counts are always set.
  std::vector<Element> solutions;  // sorted by ring index
  std::vector<Element> claimed;    // c t, c in F_p
  std::vector<Element> spurious;
  uint64_t solution_count = 0;
  uint64_t spurious_count = 0;
  // Smallest t-adic order of y - c t over spurious y (K if none).
  int spurious_min_order = 0;
};
FixedPointSet frobenius_equation_solve(int p, int K, uint64_t budget);

// phi(c([eps]-1)) = (sum_{i<p} [eps]^i) c([eps]-1) for every c in W_n(F_p)
// over W_n(F_p[t]/t^K).
CheckResult check_phi_identity(int p, int n, int K);
// Fixed-point enumeration at K_small and K_large with the shrink criterion.
CheckReport check_fixed_points(int p, int K_small, int K_large, uint64_t budget);

}  // namespace wittcheck
