#include "wittcheck/ring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "wittcheck/kernels.hpp"
#include "wittcheck/modlinalg.hpp"

namespace wittcheck {

namespace detail {
struct RingImpl {
  RingKind kind = RingKind::Integers;
  int p = 0;
  int N = 0;  // cyclotomic depth
  int M = 0;  // cyclotomic precision
  int e = 0;  // charp root depth
  int K = 0;  // charp precision
  int64_t q = 0;
  std::size_t g = 0;
  std::size_t block = 0;  // p^{N-1}
  std::vector<Ring> factors;
  std::string descriptor;
  std::optional<uint64_t> card;
};
}  // namespace detail

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::optional<uint64_t> checked_pow(uint64_t base, std::size_t exp) {
  uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > std::numeric_limits<uint64_t>::max() / base) return std::nullopt;
    r *= base;
  }
  return r;
}

const detail::RingImpl& impl_of(const Ring& r) {
  if (r.impl() == nullptr) throw RingError("null ring handle");
  return *r.impl();
}

void require_same(const Element& a, const Element& b) {
  if (a.ring().impl() != b.ring().impl() && !(a.ring() == b.ring()))
    throw RingError("ring mismatch: " + a.ring().descriptor() + " vs " + b.ring().descriptor());
}

int64_t canon(int64_t v, int64_t q) {
  v %= q;
  return v < 0 ? v + q : v;
}

// Reduce a coefficient vector of length >= g modulo Phi_{p^N}, in place.
void reduce_cyclotomic(std::vector<int64_t>& c, const detail::RingImpl& R) {
  const auto& k = kernels::active();
  const std::size_t g = R.g;
  const std::size_t B = R.block;
  std::size_t hi = c.size();
  while (hi > g) {
    const std::size_t lo = std::max(g, hi >= B ? hi - B : 0);
    const std::size_t len = hi - lo;
    // x^g = -(1 + x^B + ... + x^{(p-2)B}); every target lies below lo.
    for (int i = 0; i + 1 < R.p; ++i) k.sub_inplace(c.data() + (lo - g + i * B), c.data() + lo, len, R.q);
    hi = lo;
  }
  c.resize(g);
}

}  // namespace

void require_odd_prime(int p) {
  if (p == 2) throw RingError("p = 2 is not supported; p must be an odd prime");
  if (!is_prime(p)) throw RingError("p must be an odd prime, got " + std::to_string(p));
}

Ring Ring::integers() {
  static const Ring z = [] {
    auto r = std::make_shared<detail::RingImpl>();
    r->kind = RingKind::Integers;
    r->descriptor = "Z";
    return Ring(r);
  }();
  return z;
}

Ring Ring::cyclotomic(int p, int N, int M) {
  require_odd_prime(p);
  if (N < 1) throw RingError("cyclotomic depth N must be >= 1");
  if (M < 1) throw RingError("coefficient precision M must be >= 1");
  auto r = std::make_shared<detail::RingImpl>();
  r->kind = RingKind::Cyclotomic;
  r->p = p;
  r->N = N;
  r->M = M;
  long double bits = M * std::log2((long double)p);
  if (bits > 61) throw RingError("p^M must stay below 2^61");
  r->q = ipow(p, M);
  r->block = static_cast<std::size_t>(ipow(p, N - 1));
  r->g = r->block * static_cast<std::size_t>(p - 1);
  r->descriptor = "cyc(" + std::to_string(p) + "," + std::to_string(N) + "," + std::to_string(M) + ")";
  r->card = checked_pow(static_cast<uint64_t>(r->q), r->g);
  return Ring(r);
}

Ring Ring::charp(int p, int e, int K) {
  require_odd_prime(p);
  if (e < 0) throw RingError("root depth e must be >= 0");
  if (K < 1) throw RingError("t-adic precision K must be >= 1");
  auto r = std::make_shared<detail::RingImpl>();
  r->kind = RingKind::CharP;
  r->p = p;
  r->e = e;
  r->K = K;
  r->q = p;
  r->g = static_cast<std::size_t>(K) * static_cast<std::size_t>(ipow(p, e));
  r->descriptor = "charp(" + std::to_string(p) + "," + std::to_string(e) + "," + std::to_string(K) + ")";
  r->card = checked_pow(static_cast<uint64_t>(p), r->g);
  return Ring(r);
}

Ring Ring::product(std::vector<Ring> factors) {
  if (factors.empty()) throw RingError("product needs at least one factor");
  auto r = std::make_shared<detail::RingImpl>();
  r->kind = RingKind::Product;
  std::string d = "prod(";
  std::optional<uint64_t> card = 1;
  int p = factors[0].prime();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (!factors[i].finite()) throw RingError("product factors must be finite rings");
    if (factors[i].prime() != p) p = 0;
    d += (i ? "," : "") + factors[i].descriptor();
    auto c = factors[i].cardinality();
    if (!card || !c || (*c != 0 && *card > std::numeric_limits<uint64_t>::max() / *c))
      card.reset();
    else
      *card *= *c;
  }
  r->p = p;
  r->factors = std::move(factors);
  r->descriptor = d + ")";
  r->card = card;
  return Ring(r);
}

namespace {

struct Cursor {
  std::string_view s;
  std::size_t i = 0;
  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) throw RingError(std::string("parse error: expected '") + c + "' in '" + std::string(s) + "'");
  }
  bool eat_word(std::string_view w) {
    skip();
    if (s.substr(i, w.size()) == w) {
      i += w.size();
      return true;
    }
    return false;
  }
  long long number() {
    skip();
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (start == i) throw RingError("parse error: expected number in '" + std::string(s) + "'");
    return std::stoll(std::string(s.substr(start, i - start)));
  }
};

Ring parse_ring(Cursor& c) {
  if (c.eat_word("cyc(")) {
    int p = static_cast<int>(c.number());
    c.expect(',');
    int N = static_cast<int>(c.number());
    c.expect(',');
    int M = static_cast<int>(c.number());
    c.expect(')');
    return Ring::cyclotomic(p, N, M);
  }
  if (c.eat_word("charp(")) {
    int p = static_cast<int>(c.number());
    c.expect(',');
    int e = static_cast<int>(c.number());
    c.expect(',');
    int K = static_cast<int>(c.number());
    c.expect(')');
    return Ring::charp(p, e, K);
  }
  if (c.eat_word("prod(")) {
    std::vector<Ring> fs;
    do {
      fs.push_back(parse_ring(c));
    } while (c.eat(','));
    c.expect(')');
    return Ring::product(std::move(fs));
  }
  if (c.eat_word("Z")) return Ring::integers();
  throw RingError("unknown ring descriptor '" + std::string(c.s) + "'");
}

}  // namespace

Ring Ring::parse(std::string_view descriptor) {
  Cursor c{descriptor};
  Ring r = parse_ring(c);
  c.skip();
  if (c.i != descriptor.size()) throw RingError("trailing input in ring descriptor '" + std::string(descriptor) + "'");
  return r;
}

RingKind Ring::kind() const { return impl_of(*this).kind; }
int Ring::prime() const { return impl_of(*this).p; }
int Ring::depth() const {
  const auto& R = impl_of(*this);
  return R.kind == RingKind::CharP ? R.e : R.N;
}
int Ring::precision() const {
  const auto& R = impl_of(*this);
  return R.kind == RingKind::CharP ? R.K : R.M;
}
int64_t Ring::modulus() const { return impl_of(*this).q; }
std::size_t Ring::rank() const { return impl_of(*this).g; }
const std::vector<Ring>& Ring::factors() const { return impl_of(*this).factors; }
std::optional<uint64_t> Ring::cardinality() const { return impl_of(*this).card; }
const std::string& Ring::descriptor() const { return impl_of(*this).descriptor; }

mpz_class Ring::characteristic() const {
  const auto& R = impl_of(*this);
  switch (R.kind) {
    case RingKind::Integers:
      return 0;
    case RingKind::Cyclotomic:
    case RingKind::CharP:
      return mpz_class(static_cast<long>(R.q));
    case RingKind::Product: {
      mpz_class l = 1;
      for (const auto& f : R.factors) {
        mpz_class c = f.characteristic();
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_mpz_t());
      }
      return l;
    }
  }
  return 0;
}

std::vector<int64_t> Ring::minimal_polynomial() const {
  const auto& R = impl_of(*this);
  if (R.kind != RingKind::Cyclotomic) throw RingError("minimal polynomial needs a cyclotomic ring");
  std::vector<int64_t> f(R.g + 1, 0);
  for (int i = 0; i < R.p; ++i) f[i * R.block] = 1;
  return f;
}

bool Ring::operator==(const Ring& o) const {
  if (impl_ == o.impl_) return true;
  if (!impl_ || !o.impl_) return false;
  return impl_->descriptor == o.impl_->descriptor;
}

Element Ring::zero() const { return from_int(0); }
Element Ring::one() const { return from_int(1); }

Element Ring::from_int(int64_t v) const { return from_mpz(mpz_class(static_cast<long>(v))); }

Element Ring::from_mpz(const mpz_class& v) const {
  const auto& R = impl_of(*this);
  Element e;
  e.ring_ = *this;
  switch (R.kind) {
    case RingKind::Integers:
      e.z_ = v;
      break;
    case RingKind::Cyclotomic:
    case RingKind::CharP: {
      e.c_.assign(R.g, 0);
      mpz_class r;
      mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(R.q));
      e.c_[0] = r.get_si();
      break;
    }
    case RingKind::Product:
      for (const auto& f : R.factors) e.parts_.push_back(f.from_mpz(v));
      break;
  }
  return e;
}

Element Ring::from_coeffs(const std::vector<int64_t>& c) const {
  const auto& R = impl_of(*this);
  if (R.kind == RingKind::Integers) {
    if (c.size() > 1) throw RingError("Z takes a single coefficient");
    return from_int(c.empty() ? 0 : c[0]);
  }
  if (R.kind == RingKind::Product) throw RingError("use from_parts for products");
  Element e;
  e.ring_ = *this;
  e.c_.assign(std::max(c.size(), R.g), 0);
  for (std::size_t i = 0; i < c.size(); ++i) e.c_[i] = canon(c[i], R.q);
  if (R.kind == RingKind::Cyclotomic)
    reduce_cyclotomic(e.c_, R);
  else
    e.c_.resize(R.g);
  return e;
}

Element Ring::from_parts(std::vector<Element> parts) const {
  const auto& R = impl_of(*this);
  if (R.kind != RingKind::Product || parts.size() != R.factors.size())
    throw RingError("from_parts: shape mismatch for " + R.descriptor);
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (!(parts[i].ring() == R.factors[i])) throw RingError("from_parts: factor ring mismatch");
  Element e;
  e.ring_ = *this;
  e.parts_ = std::move(parts);
  return e;
}

Element Ring::generator() const {
  const auto& R = impl_of(*this);
  if (R.kind == RingKind::Cyclotomic) return zeta(R.N);
  if (R.kind == RingKind::CharP) return t_root(0);
  throw RingError("generator: ring " + R.descriptor + " has no distinguished generator");
}

Element Ring::zeta(int n) const {
  const auto& R = impl_of(*this);
  if (R.kind != RingKind::Cyclotomic) throw RingError("zeta needs a cyclotomic ring");
  if (n < 0 || n > R.N)
    throw RingError("zeta(" + std::to_string(n) + ") needs depth N >= " + std::to_string(n) + " in " + R.descriptor);
  std::vector<int64_t> c(static_cast<std::size_t>(ipow(R.p, R.N - n)) + 1, 0);
  c.back() = 1;
  return from_coeffs(c);
}

Element Ring::t_root(int k) const {
  const auto& R = impl_of(*this);
  if (R.kind != RingKind::CharP) throw RingError("t_root needs a char-p ring");
  if (k < 0 || k > R.e) throw RingError("t_root(" + std::to_string(k) + ") exceeds root depth of " + R.descriptor);
  std::vector<int64_t> c(static_cast<std::size_t>(ipow(R.p, R.e - k)) + 1, 0);
  c.back() = 1;
  return from_coeffs(c);
}

Element Ring::element_at(uint64_t index) const {
  const auto& R = impl_of(*this);
  if (R.kind == RingKind::Integers) throw RingError("cannot enumerate Z");
  if (!R.card) throw RingError("ring too large to enumerate: " + R.descriptor);
  if (index >= *R.card) throw RingError("element index out of range");
  Element e;
  e.ring_ = *this;
  if (R.kind == RingKind::Product) {
    for (const auto& f : R.factors) {
      uint64_t c = *f.cardinality();
      e.parts_.push_back(f.element_at(index % c));
      index /= c;
    }
    return e;
  }
  e.c_.assign(R.g, 0);
  for (std::size_t i = 0; i < R.g; ++i) {
    e.c_[i] = static_cast<int64_t>(index % static_cast<uint64_t>(R.q));
    index /= static_cast<uint64_t>(R.q);
  }
  return e;
}

uint64_t Ring::index_of(const Element& a) const {
  const auto& R = impl_of(*this);
  if (R.kind == RingKind::Integers || !R.card) throw RingError("index_of needs an enumerable ring");
  uint64_t idx = 0, mul = 1;
  if (R.kind == RingKind::Product) {
    for (std::size_t i = 0; i < R.factors.size(); ++i) {
      idx += mul * R.factors[i].index_of(a.parts_[i]);
      mul *= *R.factors[i].cardinality();
    }
    return idx;
  }
  for (std::size_t i = 0; i < R.g; ++i) {
    idx += mul * static_cast<uint64_t>(a.c_[i]);
    mul *= static_cast<uint64_t>(R.q);
  }
  return idx;
}

Element Ring::random(Rng& rng) const { return random_integer(rng, 1000); }

Element Ring::random_integer(Rng& rng, int64_t bound) const {
  const auto& R = impl_of(*this);
  Element e;
  e.ring_ = *this;
  switch (R.kind) {
    case RingKind::Integers: {
      uint64_t span = static_cast<uint64_t>(2 * bound + 1);
      e.z_ = static_cast<long>(static_cast<int64_t>(rng() % span) - bound);
      break;
    }
    case RingKind::Cyclotomic:
    case RingKind::CharP:
      e.c_.resize(R.g);
      for (auto& x : e.c_) x = static_cast<int64_t>(rng() % static_cast<uint64_t>(R.q));
      break;
    case RingKind::Product:
      for (const auto& f : R.factors) e.parts_.push_back(f.random_integer(rng, bound));
      break;
  }
  return e;
}

Element Ring::parse_element(std::string_view text) const {
  const auto& R = impl_of(*this);
  Cursor c{text};
  if (R.kind == RingKind::Product) {
    c.expect('(');
    std::vector<Element> parts;
    for (std::size_t i = 0; i < R.factors.size(); ++i) {
      if (i) c.expect(',');
      int depth = 0;
      c.skip();
      std::size_t start = c.i;
      while (c.i < text.size() && !(depth == 0 && (text[c.i] == ',' || text[c.i] == ')'))) {
        if (text[c.i] == '(') ++depth;
        if (text[c.i] == ')') --depth;
        ++c.i;
      }
      parts.push_back(R.factors[i].parse_element(text.substr(start, c.i - start)));
    }
    c.expect(')');
    return from_parts(std::move(parts));
  }
  if (R.kind == RingKind::Integers) {
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }), s.end());
    mpz_class v;
    if (v.set_str(s, 10) != 0) throw RingError("parse error: bad integer '" + s + "'");
    return from_mpz(v);
  }
  const char var = R.kind == RingKind::Cyclotomic ? 'z' : (R.e == 0 ? 't' : 's');
  std::vector<int64_t> coeffs(R.g, 0);
  bool first = true;
  while (true) {
    c.skip();
    if (c.i >= text.size()) break;
    int sign = 1;
    if (c.eat('+')) {
    } else if (c.eat('-')) {
      sign = -1;
    } else if (!first) {
      throw RingError("parse error in element '" + std::string(text) + "'");
    }
    first = false;
    c.skip();
    int64_t coef = 1;
    std::size_t exp = 0;
    bool have_num = c.i < text.size() && std::isdigit(static_cast<unsigned char>(text[c.i]));
    if (have_num) coef = c.number();
    if (c.eat('*') || (!have_num)) {
      c.expect(var);
      exp = 1;
      if (c.eat('^')) exp = static_cast<std::size_t>(c.number());
    } else if (c.eat(var)) {
      exp = 1;
      if (c.eat('^')) exp = static_cast<std::size_t>(c.number());
    }
    if (exp >= coeffs.size()) coeffs.resize(exp + 1, 0);
    coeffs[exp] = canon(coeffs[exp] + sign * canon(coef, R.q), R.q);
  }
  return from_coeffs(coeffs);
}

bool Element::is_zero() const {
  const auto& R = impl_of(ring_);
  switch (R.kind) {
    case RingKind::Integers:
      return z_ == 0;
    case RingKind::Product:
      return std::all_of(parts_.begin(), parts_.end(), [](const Element& e) { return e.is_zero(); });
    default:
      return std::all_of(c_.begin(), c_.end(), [](int64_t x) { return x == 0; });
  }
}

bool Element::is_one() const { return *this == ring_.one(); }

std::string Element::str() const {
  const auto& R = impl_of(ring_);
  switch (R.kind) {
    case RingKind::Integers:
      return z_.get_str();
    case RingKind::Product: {
      std::string s = "(";
      for (std::size_t i = 0; i < parts_.size(); ++i) s += (i ? ", " : "") + parts_[i].str();
      return s + ")";
    }
    default:
      break;
  }
  const char var = R.kind == RingKind::Cyclotomic ? 'z' : (R.e == 0 ? 't' : 's');
  std::ostringstream os;
  bool any = false;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (any) os << " + ";
    any = true;
    if (i == 0) {
      os << c_[i];
      continue;
    }
    if (c_[i] != 1) os << c_[i] << '*';
    os << var;
    if (i > 1) os << '^' << i;
  }
  if (!any) return "0";
  return os.str();
}

Element operator+(const Element& a, const Element& b) {
  require_same(a, b);
  const auto& R = impl_of(a.ring_);
  Element r;
  r.ring_ = a.ring_;
  switch (R.kind) {
    case RingKind::Integers:
      r.z_ = a.z_ + b.z_;
      break;
    case RingKind::Product:
      r.parts_.reserve(a.parts_.size());
      for (std::size_t i = 0; i < a.parts_.size(); ++i) r.parts_.push_back(a.parts_[i] + b.parts_[i]);
      break;
    default:
      r.c_.resize(R.g);
      kernels::active().add(a.c_.data(), b.c_.data(), r.c_.data(), R.g, R.q);
  }
  return r;
}

Element operator-(const Element& a, const Element& b) {
  require_same(a, b);
  const auto& R = impl_of(a.ring_);
  Element r;
  r.ring_ = a.ring_;
  switch (R.kind) {
    case RingKind::Integers:
      r.z_ = a.z_ - b.z_;
      break;
    case RingKind::Product:
      r.parts_.reserve(a.parts_.size());
      for (std::size_t i = 0; i < a.parts_.size(); ++i) r.parts_.push_back(a.parts_[i] - b.parts_[i]);
      break;
    default:
      r.c_.resize(R.g);
      kernels::active().sub(a.c_.data(), b.c_.data(), r.c_.data(), R.g, R.q);
  }
  return r;
}

Element operator-(const Element& a) { return a.ring_.zero() - a; }

Element operator*(const Element& a, const Element& b) {
  require_same(a, b);
  const auto& R = impl_of(a.ring_);
  Element r;
  r.ring_ = a.ring_;
  switch (R.kind) {
    case RingKind::Integers:
      r.z_ = a.z_ * b.z_;
      break;
    case RingKind::Product:
      r.parts_.reserve(a.parts_.size());
      for (std::size_t i = 0; i < a.parts_.size(); ++i) r.parts_.push_back(a.parts_[i] * b.parts_[i]);
      break;
    case RingKind::Cyclotomic: {
      std::vector<int64_t> full(2 * R.g - 1);
      kernels::active().convolve(a.c_.data(), R.g, b.c_.data(), R.g, full.data(), full.size(), R.q);
      reduce_cyclotomic(full, R);
      r.c_ = std::move(full);
      break;
    }
    case RingKind::CharP:
      r.c_.resize(R.g);
      kernels::active().convolve(a.c_.data(), R.g, b.c_.data(), R.g, r.c_.data(), R.g, R.q);
      break;
  }
  return r;
}

bool operator==(const Element& a, const Element& b) {
  if (!(a.ring_ == b.ring_)) return false;
  switch (impl_of(a.ring_).kind) {
    case RingKind::Integers:
      return a.z_ == b.z_;
    case RingKind::Product:
      return a.parts_ == b.parts_;
    default:
      return a.c_ == b.c_;
  }
}

bool operator<(const Element& a, const Element& b) {
  switch (impl_of(a.ring_).kind) {
    case RingKind::Integers:
      return a.z_ < b.z_;
    case RingKind::Product:
      return a.parts_ < b.parts_;
    default:
      return a.c_ < b.c_;
  }
}

Element Element::scaled(const mpz_class& c) const {
  const auto& R = impl_of(ring_);
  Element r;
  r.ring_ = ring_;
  switch (R.kind) {
    case RingKind::Integers:
      r.z_ = z_ * c;
      break;
    case RingKind::Product:
      for (const auto& part : parts_) r.parts_.push_back(part.scaled(c));
      break;
    default: {
      mpz_class m;
      mpz_fdiv_r_ui(m.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(R.q));
      const int64_t k = m.get_si();
      r.c_.resize(c_.size());
      for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = mulmod(c_[i], k, R.q);
    }
  }
  return r;
}

Element Element::pow(const mpz_class& e) const {
  if (e < 0) throw RingError("negative exponent");
  Element result = ring_.one();
  Element base = *this;
  mpz_class k = e;
  while (k != 0) {
    if (mpz_odd_p(k.get_mpz_t())) result = result * base;
    k >>= 1;
    if (k != 0) base = base * base;
  }
  return result;
}

std::size_t hash_value(const Element& a) {
  std::size_t h = 1469598103934665603ULL;
  auto mix = [&h](uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  switch (impl_of(a.ring()).kind) {
    case RingKind::Integers:
      mix(std::hash<std::string>()(a.integer().get_str(16)));
      break;
    case RingKind::Product:
      for (const auto& p : a.parts()) mix(hash_value(p));
      break;
    default:
      for (int64_t x : a.coeffs()) mix(static_cast<uint64_t>(x));
  }
  return h;
}

namespace {

// Column j is the coefficient vector of b * x^j.
std::vector<std::vector<int64_t>> multiplication_matrix(const Element& b) {
  const auto& R = impl_of(b.ring());
  std::vector<std::vector<int64_t>> cols;
  cols.reserve(R.g);
  Element x = R.g > 1 ? b.ring().from_coeffs({0, 1}) : b.ring().zero();
  Element cur = b;
  for (std::size_t j = 0; j < R.g; ++j) {
    cols.push_back(cur.coeffs());
    if (j + 1 < R.g) cur = cur * x;
  }
  std::vector<std::vector<int64_t>> rows(R.g, std::vector<int64_t>(R.g));
  for (std::size_t i = 0; i < R.g; ++i)
    for (std::size_t j = 0; j < R.g; ++j) rows[i][j] = cols[j][i];
  return rows;
}

int prime_power_exponent(const detail::RingImpl& R) { return R.kind == RingKind::CharP ? 1 : R.M; }

}  // namespace

std::optional<AffineSolutions> solve_multiplication(const Element& a, const Element& b) {
  require_same(a, b);
  const Ring& ring = a.ring();
  const auto& R = impl_of(ring);
  switch (R.kind) {
    case RingKind::Integers: {
      AffineSolutions s;
      if (b.integer() == 0) {
        if (a.integer() != 0) return std::nullopt;
        throw RingError("solution set of 0*c = 0 over Z is infinite");
      }
      if (!mpz_divisible_p(a.integer().get_mpz_t(), b.integer().get_mpz_t())) return std::nullopt;
      s.particular = ring.from_mpz(a.integer() / b.integer());
      return s;
    }
    case RingKind::Product: {
      AffineSolutions s;
      std::vector<Element> parts;
      std::vector<AffineSolutions> per;
      for (std::size_t i = 0; i < R.factors.size(); ++i) {
        auto si = solve_multiplication(a.parts()[i], b.parts()[i]);
        if (!si) return std::nullopt;
        parts.push_back(si->particular);
        per.push_back(std::move(*si));
      }
      s.particular = ring.from_parts(parts);
      for (std::size_t i = 0; i < per.size(); ++i) {
        for (std::size_t k = 0; k < per[i].generators.size(); ++k) {
          std::vector<Element> g;
          for (std::size_t j = 0; j < R.factors.size(); ++j)
            g.push_back(j == i ? per[i].generators[k] : R.factors[j].zero());
          s.generators.push_back(ring.from_parts(std::move(g)));
          s.orders.push_back(per[i].orders[k]);
        }
      }
      return s;
    }
    default: {
      auto sol = solve_mod_prime_power(multiplication_matrix(b), a.coeffs(), R.g, R.p, prime_power_exponent(R));
      if (!sol) return std::nullopt;
      AffineSolutions s;
      s.particular = ring.from_coeffs(sol->particular);
      for (std::size_t k = 0; k < sol->kernel.size(); ++k) {
        s.generators.push_back(ring.from_coeffs(sol->kernel[k]));
        s.orders.push_back(sol->orders[k]);
      }
      return s;
    }
  }
}

uint64_t AffineSolutions::count() const {
  uint64_t n = 1;
  for (uint64_t o : orders) {
    if (n > std::numeric_limits<uint64_t>::max() / o) return std::numeric_limits<uint64_t>::max();
    n *= o;
  }
  return n;
}

Element AffineSolutions::at(uint64_t idx) const {
  Element e = particular;
  for (std::size_t k = 0; k < generators.size(); ++k) {
    uint64_t c = idx % orders[k];
    idx /= orders[k];
    if (c != 0) e = e + generators[k].scaled(mpz_class(static_cast<unsigned long>(c)));
  }
  return e;
}

std::optional<Element> divide_exact(const Element& a, const Element& b) {
  if (impl_of(a.ring()).kind == RingKind::Integers && b.integer() == 0) {
    if (a.integer() == 0) return a;
    return std::nullopt;
  }
  auto s = solve_multiplication(a, b);
  if (!s) return std::nullopt;
  return s->particular;
}

std::optional<Element> inverse(const Element& a) {
  const auto& R = impl_of(a.ring());
  if (R.kind == RingKind::Integers) {
    if (a.integer() == 1 || a.integer() == -1) return a;
    return std::nullopt;
  }
  return divide_exact(a.ring().one(), a);
}

Element embed_cyclotomic(const Element& a, const Ring& target) {
  const auto& S = impl_of(a.ring());
  const auto& T = impl_of(target);
  if (S.kind != RingKind::Cyclotomic || T.kind != RingKind::Cyclotomic || S.p != T.p || S.M != T.M || T.N < S.N)
    throw RingError("embed_cyclotomic: incompatible rings " + S.descriptor + " -> " + T.descriptor);
  const std::size_t step = static_cast<std::size_t>(ipow(S.p, T.N - S.N));
  std::vector<int64_t> c((S.g - 1) * step + 1, 0);
  for (std::size_t i = 0; i < S.g; ++i) c[i * step] = a.coeffs()[i];
  return target.from_coeffs(c);
}

Element reduce_mod_p(const Element& a) {
  const auto& S = impl_of(a.ring());
  if (S.kind != RingKind::Cyclotomic) throw RingError("reduce_mod_p needs a cyclotomic ring");
  Ring target = Ring::cyclotomic(S.p, S.N, 1);
  return target.from_coeffs(a.coeffs());
}

}  // namespace wittcheck
