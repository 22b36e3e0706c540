#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace wittcheck {

// Sparse multivariate polynomial over Z with at most kMaxVars variables and
// per-variable degree below 256.
class IntPoly {
 public:
  static constexpr std::size_t kMaxVars = 12;
  using Mono = std::array<uint8_t, kMaxVars>;
  struct MonoHash {
    std::size_t operator()(const Mono& m) const {
      std::size_t h = 0;
      for (uint8_t e : m) h = h * 131 + e;
      return h;
    }
  };

  explicit IntPoly(std::size_t nvars = 0);
  static IntPoly variable(std::size_t nvars, std::size_t i);
  static IntPoly constant(std::size_t nvars, const mpz_class& c);

  std::size_t nvars() const { return nvars_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  IntPoly operator+(const IntPoly& o) const;
  IntPoly operator-(const IntPoly& o) const;
  IntPoly operator*(const IntPoly& o) const;
  IntPoly scaled(const mpz_class& c) const;
  IntPoly pow(uint64_t e) const;
  // Throws std::logic_error naming `what` when some coefficient is not divisible.
  IntPoly divided_exact(const mpz_class& d, const std::string& what) const;
  bool operator==(const IntPoly& o) const { return sorted() == o.sorted(); }

  // Deterministic view, ordered by exponent vector.
  std::map<Mono, mpz_class> sorted() const;
  const std::unordered_map<Mono, mpz_class, MonoHash>& terms() const { return terms_; }
  // Adds c to the coefficient of m (test hook used by negative controls).
  void add_term(const Mono& m, const mpz_class& c);
  // Substitutes integer values; used by the ghost-identity checks over Z.
  mpz_class evaluate(const std::vector<mpz_class>& values) const;
  std::string str(const std::vector<std::string>& names) const;

 private:
  std::size_t nvars_;
  std::unordered_map<Mono, mpz_class, MonoHash> terms_;
};

// Polynomial set compiled against a ring of given characteristic: coefficients
// reduced, dead monomials removed.
struct CompiledPolys {
  struct Term {
    mpz_class coef;
    std::vector<std::pair<uint16_t, uint16_t>> factors;  // (variable, exponent)
  };
  std::size_t nvars = 0;
  std::vector<uint16_t> max_exp;
  std::vector<std::vector<Term>> polys;
  std::size_t term_count() const;
};

CompiledPolys compile_polys(const std::vector<IntPoly>& polys, const mpz_class& characteristic);

// Evaluates every polynomial at `vars`. Alg supplies one(), mul(a, b),
// is_zero(a) and combine(coefs, terms) returning sum coefs[i] * terms[i].
template <class T, class Alg>
std::vector<T> evaluate_polys(const CompiledPolys& cp, const std::vector<T>& vars, const Alg& alg) {
  std::vector<std::vector<T>> powers(cp.nvars);
  std::vector<bool> zero(cp.nvars, false);
  for (std::size_t v = 0; v < cp.nvars; ++v) {
    if (cp.max_exp[v] == 0) continue;
    zero[v] = alg.is_zero(vars[v]);
    if (zero[v]) continue;
    powers[v].reserve(cp.max_exp[v]);
    powers[v].push_back(vars[v]);
    for (uint16_t k = 2; k <= cp.max_exp[v]; ++k) powers[v].push_back(alg.mul(powers[v].back(), vars[v]));
  }
  std::vector<T> out;
  out.reserve(cp.polys.size());
  for (const auto& poly : cp.polys) {
    std::vector<const mpz_class*> coefs;
    std::vector<T> terms;
    coefs.reserve(poly.size());
    terms.reserve(poly.size());
    for (const auto& term : poly) {
      bool dead = false;
      for (const auto& f : term.factors)
        if (zero[f.first]) {
          dead = true;
          break;
        }
      if (dead) continue;
      if (term.factors.empty()) {
        terms.push_back(alg.one());
      } else {
        T acc = powers[term.factors[0].first][term.factors[0].second - 1];
        for (std::size_t i = 1; i < term.factors.size(); ++i)
          acc = alg.mul(acc, powers[term.factors[i].first][term.factors[i].second - 1]);
        terms.push_back(std::move(acc));
      }
      coefs.push_back(&term.coef);
    }
    out.push_back(alg.combine(coefs, terms));
  }
  return out;
}

}  // namespace wittcheck
