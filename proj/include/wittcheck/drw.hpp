#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wittcheck/kaehler.hpp"
#include "wittcheck/report.hpp"
#include "wittcheck/witt.hpp"

namespace wittcheck {

// A finite abelian group given by an enumeration 0..size-1 of its elements.
struct FiniteCarrier {
  std::string name;
  uint64_t size = 1;
  uint64_t zero = 0;
  std::function<std::string(uint64_t)> format;
};

struct FiniteMap {
  std::string name;
  std::function<uint64_t(uint64_t)> apply;
};

// C_0 -> C_1 -> ... -> C_k with maps[i]: C_i -> C_{i+1}.
struct FiniteComplex {
  std::string name;
  std::vector<FiniteCarrier> carriers;
  std::vector<FiniteMap> maps;
};

struct ExactnessOptions {
  uint64_t budget = 1000000;  // largest carrier enumerated exhaustively
  unsigned workers = 0;       // 0: hardware concurrency
  uint64_t samples = 1000;    // composite-zero probes in sampled mode
  uint64_t seed = 1;
};

struct SlotVerdict {
  std::size_t index = 0;  // carrier position
  bool exhaustive = true;
  bool composite_zero = true;
  uint64_t kernel_size = 0;
  uint64_t image_size = 0;
  std::optional<uint64_t> composite_witness;  // element of C_{index-1}
  std::optional<uint64_t> exactness_witness;  // kernel element outside the image
  bool exact() const { return composite_zero && kernel_size == image_size && !exactness_witness; }
};

// Per-slot verdicts for every interior carrier.
std::vector<SlotVerdict> exactness_slots(const FiniteComplex& c, const ExactnessOptions& opt = {});
// One CheckResult per slot; any failing slot is a fail verdict.
CheckReport exactness_report(const FiniteComplex& c, const ExactnessOptions& opt = {});

// Carriers: 0, A, W_n(A), A/p^m.
FiniteCarrier zero_carrier();
FiniteCarrier ring_carrier(const Ring& A);
FiniteCarrier witt_carrier(const Ring& A, int p, std::size_t n);
WittVector witt_at(const Ring& A, int p, std::size_t n, uint64_t index);
uint64_t witt_index(const WittVector& w);

// 0 -> A -V^n-> W_{n+1}(A) -R-> W_n(A) -> 0.
FiniteComplex witt_sequence(const Ring& A, int p, int n);
// 0 -> A -V^n-> W_{n+1}(A) -Rz_{n+1}-> W_n(A) -F^n-> A/p^n A -> 0.
FiniteComplex exact_rz_sequence(const Ring& A, int n);

// Exact-Rz with slot annotations: the middle slot is truncation-limited when
// ker/im has the order of Ann((z_{n+1})_0) and the last slot when the
// cokernel is the Frobenius cokernel of A/pA.
CheckReport exact_rz_report(const Ring& A, int n, const ExactnessOptions& opt = {});

// Cyclic-group complex read from JSON: {"name", "groups":[...], "maps":[...]}
// where map i is x -> maps[i] * x from Z/groups[i] to Z/groups[i+1].
FiniteComplex cyclic_complex_from_json(const std::string& text);
FiniteComplex cyclic_complex_from_file(const std::string& path);

// Omega^1_A (+) A as a module over W_{n+1}(A):
// y (alpha, a) = (F^n(y) alpha - a F^n(dy), F^n(y) a).
class TwistedModule {
 public:
  struct Elem {
    ZVector alpha;
    Element a;
  };

  TwistedModule(const Ring& A, int n);
  int level() const { return n_; }
  const Ring& ring() const { return A_; }
  const KaehlerModule& omega() const { return omega_; }

  Elem act(const WittVector& y, const Elem& m) const;
  Elem add(const Elem& x, const Elem& y) const;
  bool equal(const Elem& x, const Elem& y) const;
  Elem random(Rng& rng) const;
  WittVector random_scalar(Rng& rng) const;
  std::string str(const Elem& m) const;

 private:
  Ring A_;
  int n_;
  KaehlerModule omega_;
};

// Module axioms, the V^n(1) closed form, Leibniz for F^n d, and
// x V^n(y) = V^n(F^n(x) y), on `triples` random samples.
CheckReport check_twisted_module(const Ring& A, int n, Rng& rng, int triples);

// For s = 1..s_max: the chain R^s(z_{n+s})...R(z_{n+1}) times
// ([zeta_{p^{n+s}}]-1) equals [zeta_{p^n}]-1, constructed members of the
// intersection divide by [zeta_{p^n}]-1, and 1 does not.
CheckReport check_witt_intersection(const Ring& A, int n, int s_max, Rng& rng, int samples);

// R^s(z_{n+s}) as an element of W_n, computed as 1 + [c] + ... + [c]^{p-1}
// with c = zeta_{p^{n+s}}.
WittVector restricted_z(const Ring& A, int n, int s);

}  // namespace wittcheck
