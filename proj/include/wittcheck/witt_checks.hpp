#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wittcheck/report.hpp"
#include "wittcheck/witt.hpp"

namespace wittcheck {

// Ghost identities of a universal table over Z on random integer pairs:
// ghost(S(u,v)) = ghost(u) + ghost(v), ghost(P) = ghost(u) ghost(v),
// ghost(N(u)) = -ghost(u), ghost_i(F(u)) = ghost_{i+1}(u).
CheckResult check_ghost_homomorphism(const WittTable& table, Rng& rng, uint64_t samples, int64_t bound = 20);

// FV = p, F[a] = [a^p], x V(y) = V(F(x) y), R F = F R, V additive,
// V(x) V(y) = p V(x y), F and R ring maps. Exhaustive over W_n(A) (pairs
// included) when |W_n(A)|^2 <= budget, otherwise on `samples` random draws.
CheckReport check_witt_identities(const Ring& A, int n, Rng& rng, uint64_t samples, uint64_t budget,
                                  unsigned workers = 0);

// F^n(z_{n+1}) = 0, F(sum_{i<p^n} [zeta_{p^{n+1}}]^i) = 0, constructed
// multiples z_{n+1} r divide back, and, when |W_{n+1}(A)| <= budget, ker F^n
// is compared with z_{n+1} W_{n+1}(A) with a lift to cyc(p, N+1, M) for the
// kernel elements that do not divide at the base precision.
CheckReport check_ker_F_generators(const Ring& A, int n, Rng& rng, uint64_t samples, uint64_t budget);

// w is a unit in W_n(A) iff w_0 is a unit in A, over all of W_n(A).
CheckResult check_witt_units(const Ring& A, int n, uint64_t budget);

// y with ([zeta_{p^n}] - 1) y = [zeta_{p^n}] - 1 mod p W_n(A) has a unit first
// coordinate. Exhaustive when |W_n(A)| <= budget, otherwise on constructed y.
CheckResult check_zeta_congruence_units(const Ring& A, int n, Rng& rng, uint64_t samples, uint64_t budget);

// A single-coefficient edit to a universal table, read from JSON:
// {"p":3,"n":2,"polynomial":"sum","index":1,"monomial":[e_0,...],"delta":1}.
struct TableCorruption {
  int p = 3;
  int n = 2;
  WittOp op = WittOp::Sum;
  std::size_t index = 0;
  std::vector<int> monomial;
  long delta = 1;
};
TableCorruption table_corruption_from_json(const std::string& text);
TableCorruption table_corruption_from_file(const std::string& path);
WittTable corrupted_table(const TableCorruption& c);

}  // namespace wittcheck
