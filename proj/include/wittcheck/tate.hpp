#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wittcheck/report.hpp"
#include "wittcheck/tilt.hpp"
#include "wittcheck/witt.hpp"

namespace wittcheck {

class TateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Element y * alpha_n of the free rank-one W_n(A)-module on alpha_n; the level
// is the length of the scalar.
class TateElement {
 public:
  TateElement() = default;
  explicit TateElement(WittVector scalar);

  int level() const { return static_cast<int>(scalar_.length()); }
  const WittVector& scalar() const { return scalar_; }
  const Ring& ring() const { return scalar_.ring(); }
  bool is_zero() const { return scalar_.is_zero(); }
  std::string str() const;

  friend bool operator==(const TateElement& a, const TateElement& b) { return a.scalar_ == b.scalar_; }
  friend bool operator!=(const TateElement& a, const TateElement& b) { return !(a == b); }
  friend TateElement operator+(const TateElement& a, const TateElement& b);
  friend TateElement operator*(const WittVector& y, const TateElement& x);

 private:
  WittVector scalar_;
};

// alpha_n at level n.
TateElement tate_alpha(const Ring& A, int n);
// ([zeta_{p^n}] - 1) alpha_n; needs N >= n.
TateElement dlog_element(const Ring& A, int n);
// Bott image at level n, equal to dlog_element(n).
TateElement bott_image(const Ring& A, int n);
// F(y alpha_{n+1}) = F(y) alpha_n.
TateElement tate_F(const TateElement& x);
// R(y alpha_{n+1}) = R(y) R(z_{n+1}) alpha_n; needs N >= n + 1.
TateElement tate_R(const TateElement& x);

// F-compatible family (x_1, ..., x_h), x_n at level n.
class TateTower {
 public:
  TateTower() = default;
  // Throws TateError unless F(x_{n+1}) = x_n for every n.
  explicit TateTower(std::vector<TateElement> layers);

  int height() const { return static_cast<int>(layers_.size()); }
  const TateElement& layer(int n) const { return layers_.at(static_cast<std::size_t>(n - 1)); }
  const std::vector<TateElement>& layers() const { return layers_; }
  // First h layers.
  TateTower truncated(int h) const;
  std::string str() const;

  friend bool operator==(const TateTower& a, const TateTower& b) { return a.layers_ == b.layers_; }
  friend bool operator!=(const TateTower& a, const TateTower& b) { return !(a == b); }

 private:
  std::vector<TateElement> layers_;
};

TateTower alpha_tower(const Ring& A, int h);
TateTower dlog_tower(const Ring& A, int h);
// ([eps] - 1) alpha through level h.
TateTower bott_image_limit(const Ring& A, int h);
// The tower generated by y alpha_h at the top: layers F^{h-n}(y) alpha_n.
TateTower tower_from_top(const WittVector& y);
// Layer n of R(x) is R(x_{n+1}); height drops by one.
TateTower tower_restrict(const TateTower& x);
// t in W(A^flat) acts on layer n through theta~_n(t).
TateTower tower_act(const TiltWittVector& t, const TateTower& x);

// F/R transitions of alpha and dlog, the ratio identity, F R = R F, R(alpha) =
// xi alpha, the twist law R(t x) = phi^{-1}(t) R(x) on samples, the Bott image
// and freeness, for towers of height h >= 2. A must be cyclotomic with
// N >= 2h - 1 + delta so that sampled tilt scalars reach theta~_h.
CheckReport check_tate_tower(const Ring& A, int h, Rng& rng, int samples, uint64_t budget);

// Freeness of y -> y alpha_n, exhaustive over W_n(A).
CheckResult check_tate_freeness(const Ring& A, int n, uint64_t budget);

// Fixed points of R: the dlog tower, 0 and W_n(F_p)([eps] - 1) alpha in the
// cyclotomic model, then the char-p solution sets at K_small and K_large.
CheckReport check_R_fixed_points(const Ring& A, int h, int n_max, int K_small, int K_large, uint64_t budget);

}  // namespace wittcheck
