#include "wittcheck/witt.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace wittcheck {

namespace {

mpz_class mpz_pow(long base, unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), e);
  return r;
}

struct RingAlg {
  const Ring& ring;
  Element one() const { return ring.one(); }
  Element mul(const Element& a, const Element& b) const { return a * b; }
  bool is_zero(const Element& a) const { return a.is_zero(); }
  Element combine(const std::vector<const mpz_class*>& coefs, const std::vector<Element>& terms) const {
    if (terms.empty()) return ring.zero();
    Element acc = *coefs[0] == 1 ? terms[0] : terms[0].scaled(*coefs[0]);
    for (std::size_t i = 1; i < terms.size(); ++i) acc += *coefs[i] == 1 ? terms[i] : terms[i].scaled(*coefs[i]);
    return acc;
  }
};

void require_shape(const WittVector& u, const WittVector& v) {
  if (!(u.ring() == v.ring()) || u.p() != v.p() || u.length() != v.length())
    throw WittError("Witt shape mismatch: " + u.str() + " vs " + v.str());
}

WittVector apply_binary(const WittVector& u, const WittVector& v, const CompiledPolys& cp) {
  std::vector<Element> vars(2 * u.length());
  for (std::size_t i = 0; i < u.length(); ++i) {
    vars[2 * i] = u[i];
    vars[2 * i + 1] = v[i];
  }
  return WittVector(u.ring(), u.p(), evaluate_polys(cp, vars, RingAlg{u.ring()}));
}

}  // namespace

IntPoly ghost_polynomial(int p, int i, std::size_t nvars, std::size_t stride, std::size_t offset) {
  IntPoly w(nvars);
  for (int j = 0; j <= i; ++j) {
    IntPoly v = IntPoly::variable(nvars, stride * j + offset);
    w = w + v.pow(mpz_pow(p, i - j).get_ui()).scaled(mpz_pow(p, j));
  }
  return w;
}

WittTable build_universal_table(int p, int n) {
  require_odd_prime(p);
  if (n < 1) throw WittError("Witt length must be >= 1");
  const std::size_t nv = 2 * static_cast<std::size_t>(n);
  if (nv > IntPoly::kMaxVars) throw WittError("Witt length too large for the universal table");
  WittTable t;
  t.p = p;
  t.n = n;
  for (int i = 0; i < n; ++i) {
    IntPoly gx = ghost_polynomial(p, i, nv, 2, 0);
    IntPoly gy = ghost_polynomial(p, i, nv, 2, 1);
    IntPoly s = gx + gy, m = gx * gy, g = IntPoly(nv) - gx;
    for (int j = 0; j < i; ++j) {
      const uint64_t e = mpz_pow(p, i - j).get_ui();
      const mpz_class pj = mpz_pow(p, j);
      s = s - t.sum[j].pow(e).scaled(pj);
      m = m - t.prod[j].pow(e).scaled(pj);
      g = g - t.neg[j].pow(e).scaled(pj);
    }
    const mpz_class pi = mpz_pow(p, i);
    const std::string tag = "(p=" + std::to_string(p) + ", i=" + std::to_string(i) + ")";
    t.sum.push_back(s.divided_exact(pi, "sum polynomial " + tag));
    t.prod.push_back(m.divided_exact(pi, "product polynomial " + tag));
    t.neg.push_back(g.divided_exact(pi, "negation polynomial " + tag));
  }
  const std::size_t fv = static_cast<std::size_t>(n);
  for (int i = 0; i + 1 < n; ++i) {
    IntPoly f = ghost_polynomial(p, i + 1, fv, 1, 0);
    for (int j = 0; j < i; ++j) f = f - t.frob[j].pow(mpz_pow(p, i - j).get_ui()).scaled(mpz_pow(p, j));
    t.frob.push_back(f.divided_exact(mpz_pow(p, i), "Frobenius polynomial (p=" + std::to_string(p) +
                                                        ", i=" + std::to_string(i) + ")"));
  }
  return t;
}

static std::shared_ptr<const CompiledPolys> compiled_witt_shared(int p, int n, WittOp op, const mpz_class& characteristic);

std::shared_ptr<const WittTable> universal_table(int p, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const WittTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, n}];
  if (!slot) slot = std::make_shared<const WittTable>(build_universal_table(p, n));
  return slot;
}

std::shared_ptr<const CompiledPolys> compiled_witt(int p, int n, WittOp op, const mpz_class& characteristic) {
  // Per-thread front cache so hot loops skip the lock and the string key.
  struct FrontKey {
    int p, n, op;
    unsigned long c;
  };
  thread_local std::vector<std::pair<FrontKey, std::shared_ptr<const CompiledPolys>>> front;
  const bool small = characteristic.fits_ulong_p();
  if (small) {
    const unsigned long c = characteristic.get_ui();
    for (const auto& [k, v] : front)
      if (k.p == p && k.n == n && k.op == static_cast<int>(op) && k.c == c) return v;
  }
  auto found = compiled_witt_shared(p, n, op, characteristic);
  if (small) front.push_back({{p, n, static_cast<int>(op), characteristic.get_ui()}, found});
  return found;
}

static std::shared_ptr<const CompiledPolys> compiled_witt_shared(int p, int n, WittOp op, const mpz_class& characteristic) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, std::string>, std::shared_ptr<const CompiledPolys>> cache;
  const auto key = std::make_tuple(p, n, static_cast<int>(op), characteristic.get_str());
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::shared_ptr<const CompiledPolys> built;
  if (op == WittOp::Frobenius) {
    auto t = universal_table(p, n + 1);
    built = std::make_shared<const CompiledPolys>(compile_polys(t->frob, characteristic));
  } else {
    auto t = universal_table(p, n);
    const auto& src = op == WittOp::Sum ? t->sum : op == WittOp::Product ? t->prod : t->neg;
    built = std::make_shared<const CompiledPolys>(compile_polys(src, characteristic));
  }
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[key];
  if (!slot) slot = built;
  return slot;
}

WittVector::WittVector(Ring ring, int p, std::vector<Element> coords)
    : ring_(std::move(ring)), p_(p), coords_(std::move(coords)) {
  for (const auto& c : coords_)
    if (!(c.ring() == ring_)) throw WittError("Witt coordinate from a different ring");
}

WittVector WittVector::zero(const Ring& ring, int p, std::size_t n) {
  return WittVector(ring, p, std::vector<Element>(n, ring.zero()));
}

WittVector WittVector::one(const Ring& ring, int p, std::size_t n) {
  auto w = zero(ring, p, n);
  if (n > 0) w.coords_[0] = ring.one();
  return w;
}

WittVector WittVector::teichmuller(const Element& a, int p, std::size_t n) {
  auto w = zero(a.ring(), p, n);
  if (n > 0) w.coords_[0] = a;
  return w;
}

WittVector WittVector::from_integer(const Ring& ring, int p, std::size_t n, const mpz_class& c) {
  return scale_integer(one(ring, p, n), c);
}

bool WittVector::is_zero() const {
  for (const auto& c : coords_)
    if (!c.is_zero()) return false;
  return true;
}

std::string WittVector::str() const {
  std::string s = "W[p=" + std::to_string(p_) + ",n=" + std::to_string(coords_.size());
  for (const auto& c : coords_) s += "; " + c.str();
  return s + "]";
}

bool operator==(const WittVector& a, const WittVector& b) {
  return a.p() == b.p() && a.ring() == b.ring() && a.coords() == b.coords();
}

WittVector operator+(const WittVector& u, const WittVector& v) {
  require_shape(u, v);
  return apply_binary(u, v, *compiled_witt(u.p(), static_cast<int>(u.length()), WittOp::Sum,
                                           u.ring().characteristic()));
}

WittVector operator*(const WittVector& u, const WittVector& v) {
  require_shape(u, v);
  return apply_binary(u, v, *compiled_witt(u.p(), static_cast<int>(u.length()), WittOp::Product,
                                           u.ring().characteristic()));
}

WittVector operator-(const WittVector& u) {
  auto cp = compiled_witt(u.p(), static_cast<int>(u.length()), WittOp::Negation, u.ring().characteristic());
  std::vector<Element> vars(2 * u.length(), u.ring().zero());
  for (std::size_t i = 0; i < u.length(); ++i) vars[2 * i] = u[i];
  return WittVector(u.ring(), u.p(), evaluate_polys(*cp, vars, RingAlg{u.ring()}));
}

WittVector operator-(const WittVector& u, const WittVector& v) { return u + (-v); }

WittVector witt_add(const WittVector& u, const WittVector& v, const WittTable& table) {
  require_shape(u, v);
  if (table.p != u.p() || static_cast<std::size_t>(table.n) != u.length()) throw WittError("table shape mismatch");
  return apply_binary(u, v, compile_polys(table.sum, u.ring().characteristic()));
}

WittVector witt_mul(const WittVector& u, const WittVector& v, const WittTable& table) {
  require_shape(u, v);
  if (table.p != u.p() || static_cast<std::size_t>(table.n) != u.length()) throw WittError("table shape mismatch");
  return apply_binary(u, v, compile_polys(table.prod, u.ring().characteristic()));
}

std::vector<Element> ghost(const WittVector& w) {
  std::vector<Element> g;
  const mpz_class p(w.p());
  for (std::size_t i = 0; i < w.length(); ++i) {
    Element acc = w.ring().zero();
    for (std::size_t j = 0; j <= i; ++j) {
      mpz_class pj, e;
      mpz_pow_ui(pj.get_mpz_t(), p.get_mpz_t(), j);
      mpz_pow_ui(e.get_mpz_t(), p.get_mpz_t(), i - j);
      acc += w[j].pow(e).scaled(pj);
    }
    g.push_back(acc);
  }
  return g;
}

WittVector verschiebung(const WittVector& w) { return verschiebung(w, 1); }

WittVector verschiebung(const WittVector& w, int k) {
  std::vector<Element> c(static_cast<std::size_t>(k), w.ring().zero());
  c.insert(c.end(), w.coords().begin(), w.coords().end());
  return WittVector(w.ring(), w.p(), std::move(c));
}

WittVector restrict_once(const WittVector& w) {
  if (w.length() == 0) throw WittError("restriction of an empty Witt vector");
  return restrict_to(w, w.length() - 1);
}

WittVector restrict_to(const WittVector& w, std::size_t length) {
  if (length > w.length()) throw WittError("restriction cannot lengthen a Witt vector");
  return WittVector(w.ring(), w.p(), std::vector<Element>(w.coords().begin(), w.coords().begin() + length));
}

WittVector frobenius(const WittVector& w) {
  if (w.length() < 2) throw WittError("Frobenius needs length >= 2 (W_n -> W_{n-1})");
  auto cp = compiled_witt(w.p(), static_cast<int>(w.length() - 1), WittOp::Frobenius, w.ring().characteristic());
  return WittVector(w.ring(), w.p(), evaluate_polys(*cp, w.coords(), RingAlg{w.ring()}));
}

WittVector frobenius(const WittVector& w, int k) {
  WittVector r = w;
  for (int i = 0; i < k; ++i) r = frobenius(r);
  return r;
}

WittVector scale_integer(const WittVector& w, const mpz_class& c) {
  mpz_class k = abs(c);
  WittVector result = WittVector::zero(w.ring(), w.p(), w.length());
  WittVector base = w;
  while (k != 0) {
    if (mpz_odd_p(k.get_mpz_t())) result = result + base;
    k >>= 1;
    if (k != 0) base = base + base;
  }
  return c < 0 ? -result : result;
}

WittVector power(const WittVector& w, uint64_t e) {
  WittVector result = WittVector::one(w.ring(), w.p(), w.length());
  WittVector base = w;
  while (e != 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e != 0) base = base * base;
  }
  return result;
}

std::size_t hash_value(const WittVector& w) {
  std::size_t h = 0;
  for (const auto& c : w.coords()) h = h * 1000003u ^ hash_value(c);
  return h;
}

WittVector z_element(const Ring& ring, int n, std::size_t length) {
  const int p = ring.prime();
  const Element zeta = ring.zeta(n);
  WittVector z = WittVector::zero(ring, p, length);
  Element power = ring.one();
  for (int i = 0; i < p; ++i) {
    z = z + WittVector::teichmuller(power, p, length);
    power *= zeta;
  }
  return z;
}

namespace {

struct DivideContext {
  uint64_t budget;
  uint64_t tried = 0;
  bool exhausted = false;
};

std::optional<WittVector> divide_rec(const WittVector& x, const WittVector& d, DivideContext& ctx) {
  const std::size_t L = x.length();
  std::optional<AffineSolutions> sols;
  if (x.ring().kind() == RingKind::Integers && d[0].is_zero()) {
    if (!x[0].is_zero()) return std::nullopt;
    AffineSolutions s;
    s.particular = x.ring().zero();
    sols = s;
  } else {
    sols = solve_multiplication(x[0], d[0]);
  }
  if (!sols) return std::nullopt;
  if (L == 1) {
    ++ctx.tried;
    return WittVector(x.ring(), x.p(), {sols->particular});
  }
  const WittVector fd = frobenius(d);
  const uint64_t count = sols->count();
  for (uint64_t idx = 0; idx < count; ++idx) {
    if (ctx.tried >= ctx.budget) {
      ctx.exhausted = true;
      return std::nullopt;
    }
    ++ctx.tried;
    const Element c0 = sols->at(idx);
    const WittVector t0 = WittVector::teichmuller(c0, x.p(), L);
    const WittVector r = x - d * t0;
    if (!r[0].is_zero()) throw std::logic_error("Witt division: first coordinate did not cancel");
    WittVector rest(x.ring(), x.p(), std::vector<Element>(r.coords().begin() + 1, r.coords().end()));
    auto sub = divide_rec(rest, fd, ctx);
    if (sub) return t0 + verschiebung(*sub);
    if (ctx.exhausted) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

DivideResult witt_divide(const WittVector& x, const WittVector& d, uint64_t budget) {
  require_shape(x, d);
  DivideResult res;
  if (x.length() == 0) {
    res.status = DivideStatus::Found;
    res.quotient = x;
    return res;
  }
  DivideContext ctx{budget};
  auto q = divide_rec(x, d, ctx);
  res.candidates_tried = ctx.tried;
  if (q) {
    if (!(d * *q == x)) throw std::logic_error("Witt division produced a wrong quotient");
    res.status = DivideStatus::Found;
    res.quotient = std::move(q);
  } else {
    res.status = ctx.exhausted ? DivideStatus::BudgetExhausted : DivideStatus::NoSolution;
  }
  return res;
}

std::optional<TeichmullerDivision> teichmuller_divide(const WittVector& x, const Element& a, int n_max,
                                                      uint64_t budget) {
  TeichmullerDivision out;
  if (a.is_zero()) {
    out.divisor_is_zero_divisor = true;
  } else if (a.ring().finite()) {
    auto ann = solve_multiplication(a.ring().zero(), a);
    out.divisor_is_zero_divisor = ann && !ann->generators.empty();
  }
  const WittVector ta = WittVector::teichmuller(a, x.p(), x.length());
  mpz_class pn = 1;
  for (int N = 0; N <= n_max; ++N) {
    const WittVector target = N == 0 ? x : scale_integer(x, pn);
    auto r = witt_divide(target, ta, budget);
    if (r.status == DivideStatus::Found) {
      out.N = N;
      out.quotient = *r.quotient;
      return out;
    }
    pn *= x.p();
  }
  return std::nullopt;
}

std::optional<WittVector> witt_inverse(const WittVector& w, uint64_t budget) {
  auto r = witt_divide(WittVector::one(w.ring(), w.p(), w.length()), w, budget);
  if (r.status != DivideStatus::Found) return std::nullopt;
  return r.quotient;
}

}  // namespace wittcheck
