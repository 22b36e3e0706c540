#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace wittcheck {

int64_t mulmod(int64_t a, int64_t b, int64_t q);
int64_t powmod(int64_t a, uint64_t e, int64_t q);
// Inverse of a unit modulo q.
int64_t invmod(int64_t a, int64_t q);
int64_t ipow(int64_t b, int e);
// p-adic valuation of a in Z/p^M, with v(0) = M.
int valuation(int64_t a, int p, int M);

struct ModSolution {
  std::vector<int64_t> particular;
  // Solutions are particular + sum c_i kernel[i], c_i modulo orders[i].
  std::vector<std::vector<int64_t>> kernel;
  std::vector<uint64_t> orders;
};

// Solves A x = b over Z/p^M by diagonalising A with minimal-valuation pivots.
// A is row-major with a.size() rows and `cols` columns.
std::optional<ModSolution> solve_mod_prime_power(std::vector<std::vector<int64_t>> a,
                                                 std::vector<int64_t> b, std::size_t cols, int p,
                                                 int M);

}  // namespace wittcheck
