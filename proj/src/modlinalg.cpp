#include "wittcheck/modlinalg.hpp"

#include <stdexcept>
#include <utility>

namespace wittcheck {

int64_t mulmod(int64_t a, int64_t b, int64_t q) {
  __int128 r = static_cast<__int128>(a) * b % q;
  if (r < 0) r += q;
  return static_cast<int64_t>(r);
}

int64_t powmod(int64_t a, uint64_t e, int64_t q) {
  int64_t r = 1 % q;
  a %= q;
  if (a < 0) a += q;
  while (e != 0) {
    if (e & 1) r = mulmod(r, a, q);
    a = mulmod(a, a, q);
    e >>= 1;
  }
  return r;
}

int64_t invmod(int64_t a, int64_t q) {
  __int128 t = 0, nt = 1, r = q, nr = a % q;
  if (nr < 0) nr += q;
  while (nr != 0) {
    __int128 k = r / nr;
    t -= k * nt;
    std::swap(t, nt);
    r -= k * nr;
    std::swap(r, nr);
  }
  if (r != 1) throw std::domain_error("invmod: not a unit");
  if (t < 0) t += q;
  return static_cast<int64_t>(t);
}

int64_t ipow(int64_t b, int e) {
  int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

int valuation(int64_t a, int p, int M) {
  if (a == 0) return M;
  int v = 0;
  while (a % p == 0 && v < M) {
    a /= p;
    ++v;
  }
  return v;
}

std::optional<ModSolution> solve_mod_prime_power(std::vector<std::vector<int64_t>> a,
                                                 std::vector<int64_t> b, std::size_t cols, int p,
                                                 int M) {
  const int64_t q = ipow(p, M);
  const std::size_t rows = a.size();
  std::vector<std::vector<int64_t>> Q(cols, std::vector<int64_t>(cols, 0));
  for (std::size_t i = 0; i < cols; ++i) Q[i][i] = 1 % q;
  for (auto& row : a)
    for (auto& x : row) x = ((x % q) + q) % q;
  for (auto& x : b) x = ((x % q) + q) % q;

  std::vector<int> vals;
  std::size_t k = 0;
  for (; k < rows && k < cols; ++k) {
    int best = M;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = k; i < rows && best > 0; ++i)
      for (std::size_t j = k; j < cols; ++j) {
        int v = valuation(a[i][j], p, M);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    if (best == M) break;
    std::swap(a[k], a[bi]);
    std::swap(b[k], b[bi]);
    if (bj != k) {
      for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][k], a[i][bj]);
      for (std::size_t i = 0; i < cols; ++i) std::swap(Q[i][k], Q[i][bj]);
    }
    const int64_t pv = ipow(p, best);
    const int64_t unit = invmod(a[k][k] / pv, q);
    for (std::size_t j = k; j < cols; ++j) a[k][j] = mulmod(a[k][j], unit, q);
    b[k] = mulmod(b[k], unit, q);
    for (std::size_t i = k + 1; i < rows; ++i) {
      if (a[i][k] == 0) continue;
      const int64_t f = a[i][k] / pv;
      for (std::size_t j = k; j < cols; ++j) a[i][j] = ((a[i][j] - mulmod(f, a[k][j], q)) % q + q) % q;
      b[i] = ((b[i] - mulmod(f, b[k], q)) % q + q) % q;
    }
    for (std::size_t j = k + 1; j < cols; ++j) {
      if (a[k][j] == 0) continue;
      const int64_t f = a[k][j] / pv;
      a[k][j] = 0;
      for (std::size_t i = 0; i < cols; ++i) Q[i][j] = ((Q[i][j] - mulmod(f, Q[i][k], q)) % q + q) % q;
    }
    vals.push_back(best);
  }
  const std::size_t r = vals.size();
  for (std::size_t i = r; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  std::vector<int64_t> y(cols, 0);
  for (std::size_t i = 0; i < r; ++i) {
    const int64_t pv = ipow(p, vals[i]);
    if (b[i] % pv != 0) return std::nullopt;
    y[i] = b[i] / pv;
  }
  ModSolution out;
  out.particular.assign(cols, 0);
  for (std::size_t i = 0; i < cols; ++i) {
    int64_t s = 0;
    for (std::size_t j = 0; j < cols; ++j) s = (s + mulmod(Q[i][j], y[j], q)) % q;
    out.particular[i] = s;
  }
  for (std::size_t j = 0; j < cols; ++j) {
    int v = j < r ? vals[j] : M;
    if (v == 0) continue;
    const int64_t scale = ipow(p, M - v);
    std::vector<int64_t> g(cols);
    for (std::size_t i = 0; i < cols; ++i) g[i] = mulmod(Q[i][j], scale, q);
    out.kernel.push_back(std::move(g));
    out.orders.push_back(static_cast<uint64_t>(ipow(p, v)));
  }
  return out;
}

}  // namespace wittcheck
