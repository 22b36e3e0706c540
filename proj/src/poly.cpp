#include "wittcheck/poly.hpp"

#include <sstream>
#include <stdexcept>

namespace wittcheck {

IntPoly::IntPoly(std::size_t nvars) : nvars_(nvars) {
  if (nvars > kMaxVars) throw std::invalid_argument("IntPoly: too many variables");
}

IntPoly IntPoly::variable(std::size_t nvars, std::size_t i) {
  IntPoly p(nvars);
  Mono m{};
  m[i] = 1;
  p.terms_[m] = 1;
  return p;
}

IntPoly IntPoly::constant(std::size_t nvars, const mpz_class& c) {
  IntPoly p(nvars);
  if (c != 0) p.terms_[Mono{}] = c;
  return p;
}

void IntPoly::add_term(const Mono& m, const mpz_class& c) {
  auto& slot = terms_[m];
  slot += c;
  if (slot == 0) terms_.erase(m);
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
  IntPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

IntPoly IntPoly::operator-(const IntPoly& o) const {
  IntPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

IntPoly IntPoly::operator*(const IntPoly& o) const {
  IntPoly r(nvars_);
  r.terms_.reserve(terms_.size() * o.terms_.size());
  mpz_class prod;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) {
      Mono m;
      for (std::size_t i = 0; i < kMaxVars; ++i) {
        unsigned s = unsigned(ma[i]) + mb[i];
        if (s > 255) throw std::overflow_error("IntPoly: exponent exceeds 255");
        m[i] = static_cast<uint8_t>(s);
      }
      prod = ca * cb;
      r.terms_[m] += prod;
    }
  for (auto it = r.terms_.begin(); it != r.terms_.end();) {
    if (it->second == 0)
      it = r.terms_.erase(it);
    else
      ++it;
  }
  return r;
}

IntPoly IntPoly::scaled(const mpz_class& c) const {
  IntPoly r(nvars_);
  if (c == 0) return r;
  for (const auto& [m, v] : terms_) r.terms_[m] = v * c;
  return r;
}

IntPoly IntPoly::pow(uint64_t e) const {
  IntPoly result = constant(nvars_, 1);
  IntPoly base = *this;
  while (e != 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e != 0) base = base * base;
  }
  return result;
}

IntPoly IntPoly::divided_exact(const mpz_class& d, const std::string& what) const {
  IntPoly r(nvars_);
  for (const auto& [m, c] : terms_) {
    if (!mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t()))
      throw std::logic_error("non-exact division by " + d.get_str() + " while building " + what);
    r.terms_[m] = c / d;
  }
  return r;
}

std::map<IntPoly::Mono, mpz_class> IntPoly::sorted() const { return {terms_.begin(), terms_.end()}; }

mpz_class IntPoly::evaluate(const std::vector<mpz_class>& values) const {
  mpz_class total = 0, t, pw;
  for (const auto& [m, c] : terms_) {
    t = c;
    for (std::size_t i = 0; i < nvars_; ++i)
      if (m[i] != 0) {
        mpz_pow_ui(pw.get_mpz_t(), values[i].get_mpz_t(), m[i]);
        t *= pw;
      }
    total += t;
  }
  return total;
}

std::string IntPoly::str(const std::vector<std::string>& names) const {
  auto s = sorted();
  if (s.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    const auto& [m, c] = *it;
    mpz_class a = abs(c);
    os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
    first = false;
    bool unit_coef = a == 1;
    bool any_var = false;
    for (std::size_t i = 0; i < nvars_; ++i) any_var |= m[i] != 0;
    if (!unit_coef || !any_var) os << a.get_str();
    bool need_star = !unit_coef || !any_var;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (m[i] == 0) continue;
      if (need_star) os << '*';
      os << names[i];
      if (m[i] > 1) os << '^' << unsigned(m[i]);
      need_star = true;
    }
  }
  return os.str();
}

std::size_t CompiledPolys::term_count() const {
  std::size_t n = 0;
  for (const auto& p : polys) n += p.size();
  return n;
}

CompiledPolys compile_polys(const std::vector<IntPoly>& polys, const mpz_class& characteristic) {
  CompiledPolys cp;
  cp.nvars = polys.empty() ? 0 : polys[0].nvars();
  cp.max_exp.assign(cp.nvars, 0);
  for (const auto& poly : polys) {
    std::vector<CompiledPolys::Term> terms;
    for (const auto& [m, c] : poly.sorted()) {
      CompiledPolys::Term t;
      t.coef = c;
      if (characteristic != 0) {
        mpz_fdiv_r(t.coef.get_mpz_t(), c.get_mpz_t(), characteristic.get_mpz_t());
        if (t.coef == 0) continue;
      }
      for (std::size_t i = 0; i < cp.nvars; ++i)
        if (m[i] != 0) {
          t.factors.emplace_back(static_cast<uint16_t>(i), static_cast<uint16_t>(m[i]));
          if (m[i] > cp.max_exp[i]) cp.max_exp[i] = m[i];
        }
      terms.push_back(std::move(t));
    }
    cp.polys.push_back(std::move(terms));
  }
  return cp;
}

}  // namespace wittcheck
