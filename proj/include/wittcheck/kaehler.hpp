#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "wittcheck/report.hpp"
#include "wittcheck/ring.hpp"
#include "wittcheck/witt.hpp"

namespace wittcheck {

using ZVector = std::vector<mpz_class>;
using ZMatrix = std::vector<ZVector>;

// U * M * V = D with D diagonal, d_i | d_{i+1}, d_i >= 0, U and V unimodular.
struct SmithForm {
  ZMatrix U, D, V, Vinv;
  std::vector<mpz_class> diagonal;  // min(rows, cols) entries
  std::size_t rank = 0;
};

SmithForm smith_normal_form(const ZMatrix& m, std::size_t cols);
mpz_class determinant(ZMatrix m);
ZMatrix multiply(const ZMatrix& a, const ZMatrix& b, std::size_t b_cols);

// Z^g modulo the row span of `relations`.
class PresentedModule {
 public:
  PresentedModule() = default;
  PresentedModule(std::size_t gens, ZMatrix relations);

  std::size_t gens() const { return gens_; }
  const ZMatrix& relations() const { return relations_; }
  const SmithForm& smith() const { return snf_; }

  // d_0 | d_1 | ... over all generators (0 marks a free summand), with unit
  // factors kept.
  const std::vector<mpz_class>& invariant_factors() const { return factors_; }
  // Non-unit invariant factors only.
  std::vector<mpz_class> elementary_divisors() const;
  std::size_t free_rank() const;
  // Group order, or nothing when infinite.
  std::optional<mpz_class> order() const;

  // Coordinates in the SNF basis, reduced mod d_i.
  ZVector normal_form(const ZVector& x) const;
  bool is_zero(const ZVector& x) const;
  bool equal(const ZVector& a, const ZVector& b) const;
  // Additive order of x; nothing when infinite.
  std::optional<mpz_class> element_order(const ZVector& x) const;
  // Some w with c * w = x, or nothing.
  std::optional<ZVector> divide_by_integer(const ZVector& x, const mpz_class& c) const;

  struct Torsion {
    mpz_class exponent;
    std::vector<ZVector> generators;  // original coordinates
    std::vector<mpz_class> orders;    // order of each generator (all > 1)
    mpz_class size() const;
  };
  // The subgroup killed by n.
  Torsion torsion(const mpz_class& n) const;

  // Order of the subgroup generated by `vectors` (finite modules only).
  mpz_class subgroup_order(const std::vector<ZVector>& vectors) const;

 private:
  std::size_t gens_ = 0;
  ZMatrix relations_;
  SmithForm snf_;
  std::vector<mpz_class> factors_;
};

// Z-linear map on generators: x -> x * matrix.
struct ModuleMap {
  const PresentedModule* source = nullptr;
  const PresentedModule* target = nullptr;
  ZMatrix matrix;  // source.gens() rows, target.gens() columns

  ZVector apply(const ZVector& x) const;
  // Every source relation lands in the target relations.
  bool well_defined() const;
};

// Z[x]/(f) or Z[x]/(f, q) for a monic integer polynomial f of degree g.
// Elements are coefficient vectors of length g in the power basis.
class MonogenicAlgebra {
 public:
  MonogenicAlgebra(ZVector f, std::optional<mpz_class> modulus = std::nullopt);
  static MonogenicAlgebra cyclotomic(int p, int N, std::optional<mpz_class> modulus = std::nullopt);
  // Same presentation as a finite cyclotomic Ring.
  static MonogenicAlgebra of_ring(const Ring& cyc);

  std::size_t degree() const { return g_; }
  const ZVector& polynomial() const { return f_; }
  const std::optional<mpz_class>& modulus() const { return q_; }

  ZVector reduce(ZVector a) const;
  ZVector one() const;
  ZVector from_int(const mpz_class& c) const;
  ZVector x_power(uint64_t k) const;
  ZVector add(const ZVector& a, const ZVector& b) const;
  ZVector sub(const ZVector& a, const ZVector& b) const;
  ZVector mul(const ZVector& a, const ZVector& b) const;
  ZVector scale(const ZVector& a, const mpz_class& c) const;
  ZVector pow(const ZVector& a, uint64_t e) const;
  bool equal(const ZVector& a, const ZVector& b) const { return reduce(a) == reduce(b); }

  ZVector from_element(const Element& a) const;
  Element to_element(const ZVector& a, const Ring& cyc) const;
  std::string str(const ZVector& a) const;

 private:
  ZVector f_;
  std::size_t g_ = 0;
  std::optional<mpz_class> q_;
};

// Omega^1 of a monogenic algebra over Z: generators x^i dx, relations
// x^j f'(x) dx and, with a modulus q, q x^j dx.
class KaehlerModule {
 public:
  explicit KaehlerModule(MonogenicAlgebra A);

  const MonogenicAlgebra& algebra() const { return A_; }
  const PresentedModule& module() const { return M_; }

  ZVector dx() const;
  ZVector d(const ZVector& a) const;
  // a * omega.
  ZVector act(const ZVector& a, const ZVector& omega) const;
  // u^{-1} du; u must be a unit with the given inverse.
  ZVector dlog(const ZVector& u, const ZVector& u_inverse) const;
  ZVector add(const ZVector& a, const ZVector& b) const;
  ZVector sub(const ZVector& a, const ZVector& b) const;
  ZVector scale(const ZVector& a, const mpz_class& c) const;
  bool is_zero(const ZVector& omega) const { return M_.is_zero(omega); }
  bool equal(const ZVector& a, const ZVector& b) const { return M_.equal(a, b); }
  std::string str(const ZVector& omega) const;

 private:
  MonogenicAlgebra A_;
  PresentedModule M_;
};

// Inverse of a unit in a monogenic algebra: roots of unity by powering,
// finite cyclotomic quotients through the ring-core unit test.
std::optional<ZVector> algebra_inverse(const MonogenicAlgebra& A, const ZVector& u);

// sum_{m=1}^{p-1} m zeta_p^m * zeta_{p^2}^{-1} d zeta_{p^2} in Omega^1 of
// Z[zeta_{p^N}] (optionally mod q).
struct AlphaResult {
  ZVector alpha;
  ZVector lhs;  // (zeta_p - 1) alpha
  ZVector rhs;  // dlog zeta_p
  bool identity_holds = false;
  std::optional<mpz_class> alpha_order;
};
AlphaResult solve_alpha(int p, int N, std::optional<mpz_class> modulus = std::nullopt);

// p^r-torsion of Omega^1_{Z[zeta_{p^N}]/p^M} against A/p^r A for every r in
// 1..r_max: group order and A-cyclicity via a generator.
struct TorsionLayer {
  int r = 0;
  std::vector<mpz_class> orders;
  mpz_class size;
  mpz_class expected_size;  // |A / p^r A|
  bool generated_by_one_element = false;
  ZVector generator;
  bool matches() const { return size == expected_size && generated_by_one_element; }
};
std::vector<TorsionLayer> cyclotomic_torsion_layers(int p, int N, int M, int r_max);

CheckResult check_omega_torsion_stability(int p, int N, int M);
// Order of Omega^1_{Z[zeta_{p^N}]/Z} against the discriminant, the order of
// d zeta, and generation by d zeta when the order is p.
CheckResult check_omega_cyclotomic(int p, int N);
CheckResult check_alpha(int p, int N);
CheckReport check_p_surjectivity(const Ring& cyc, Rng& rng, int samples);

struct LogTuple {
  std::string label;
  Element m, u, x, y;
  int N = 0;
};
// Standard tuples on cyc(3,2,3) plus unit and trivial cases.
std::vector<LogTuple> default_log_tuples(const Ring& A);
CheckReport log_presentation_check(const Ring& A, const std::vector<LogTuple>& tuples);

// I/I^2 -> Omega^1_{Z[x]/Z} (x) A -> Omega^1_{A/Z} -> 0 for A = Z[x]/(f).
CheckResult check_conormal(const MonogenicAlgebra& A);

// sum_i a_i^{p^{n-i}-1} d a_i for w = (a_0, ..., a_n) over a cyclotomic ring.
ZVector fn_d(const KaehlerModule& omega, const WittVector& w);

}  // namespace wittcheck
