#include "wittcheck/drw.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "wittcheck/modlinalg.hpp"
#include "wittcheck/parallel.hpp"

namespace wittcheck {

namespace {

constexpr uint64_t kNone = std::numeric_limits<uint64_t>::max();

mpz_class pow_ui(long b, unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(b), e);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Exactness

std::vector<SlotVerdict> exactness_slots(const FiniteComplex& c, const ExactnessOptions& opt) {
  if (c.maps.size() + 1 != c.carriers.size()) throw std::invalid_argument("complex needs one map per gap");
  const unsigned workers = worker_count(opt.workers);
  std::vector<SlotVerdict> out;
  for (std::size_t i = 1; i + 1 < c.carriers.size(); ++i) {
    const auto& prev = c.carriers[i - 1];
    const auto& cur = c.carriers[i];
    const auto& next = c.carriers[i + 1];
    const auto& f = c.maps[i - 1];
    const auto& g = c.maps[i];
    SlotVerdict v;
    v.index = i;
    v.exhaustive = prev.size <= opt.budget && cur.size <= opt.budget;
    if (!v.exhaustive) {
      Rng rng(opt.seed + i);
      for (uint64_t s = 0; s < opt.samples; ++s) {
        uint64_t x = rng() % prev.size;
        if (g.apply(f.apply(x)) != next.zero) {
          v.composite_zero = false;
          if (!v.composite_witness || x < *v.composite_witness) v.composite_witness = x;
        }
      }
      out.push_back(v);
      continue;
    }
    std::unique_ptr<std::atomic<uint8_t>[]> marks(new std::atomic<uint8_t>[cur.size]());
    std::atomic<uint64_t> comp_witness{kNone};
    parallel_range(prev.size, workers, [&](uint64_t b, uint64_t e) {
      for (uint64_t x = b; x < e; ++x) {
        const uint64_t y = f.apply(x);
        marks[y].store(1, std::memory_order_relaxed);
        if (g.apply(y) != next.zero) keep_min(comp_witness, x);
      }
    });
    std::atomic<uint64_t> kernel{0}, image{0}, exact_witness{kNone};
    parallel_range(cur.size, workers, [&](uint64_t b, uint64_t e) {
      uint64_t k = 0, im = 0;
      for (uint64_t y = b; y < e; ++y) {
        const bool in_image = marks[y].load(std::memory_order_relaxed) != 0;
        im += in_image;
        if (g.apply(y) == next.zero) {
          ++k;
          if (!in_image) keep_min(exact_witness, y);
        }
      }
      kernel += k;
      image += im;
    });
    v.kernel_size = kernel;
    v.image_size = image;
    if (comp_witness != kNone) {
      v.composite_zero = false;
      v.composite_witness = comp_witness.load();
    }
    if (exact_witness != kNone) v.exactness_witness = exact_witness.load();
    out.push_back(v);
  }
  return out;
}

namespace {

CheckResult slot_result(const FiniteComplex& c, const SlotVerdict& v) {
  const auto& cur = c.carriers[v.index];
  CheckResult r;
  r.id = c.name + " @ " + cur.name;
  r.anchor = "kernel equals image at " + cur.name;
  r.meta("carrier_size", std::to_string(cur.size)).meta("mode", v.exhaustive ? "exhaustive" : "sampled");
  if (v.composite_witness) {
    r.verdict = Verdict::Fail;
    const auto& prev = c.carriers[v.index - 1];
    r.witness("composite nonzero on", prev.format ? prev.format(*v.composite_witness)
                                                   : std::to_string(*v.composite_witness));
  }
  if (!v.exhaustive) {
    r.note("sampled: composite-zero only");
    return r;
  }
  r.witness("kernel size", std::to_string(v.kernel_size)).witness("image size", std::to_string(v.image_size));
  if (v.exactness_witness) {
    r.verdict = Verdict::Fail;
    r.witness("kernel element outside image",
              cur.format ? cur.format(*v.exactness_witness) : std::to_string(*v.exactness_witness));
  }
  return r;
}

}  // namespace

CheckReport exactness_report(const FiniteComplex& c, const ExactnessOptions& opt) {
  CheckReport rep;
  rep.suite = c.name;
  for (const auto& v : exactness_slots(c, opt)) rep.add(slot_result(c, v));
  return rep;
}

// ---------------------------------------------------------------------------
// Carriers

FiniteCarrier zero_carrier() { return {"0", 1, 0, [](uint64_t) { return std::string("0"); }}; }

FiniteCarrier ring_carrier(const Ring& A) {
  auto n = A.cardinality();
  if (!n) throw RingError("carrier needs a finite ring");
  return {A.descriptor(), *n, A.index_of(A.zero()), [A](uint64_t i) { return A.element_at(i).str(); }};
}

WittVector witt_at(const Ring& A, int p, std::size_t n, uint64_t index) {
  const uint64_t c = *A.cardinality();
  std::vector<Element> coords;
  coords.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    coords.push_back(A.element_at(index % c));
    index /= c;
  }
  return WittVector(A, p, std::move(coords));
}

uint64_t witt_index(const WittVector& w) {
  const Ring& A = w.ring();
  const uint64_t c = *A.cardinality();
  uint64_t idx = 0;
  for (std::size_t i = w.length(); i-- > 0;) idx = idx * c + A.index_of(w[i]);
  return idx;
}

FiniteCarrier witt_carrier(const Ring& A, int p, std::size_t n) {
  const uint64_t c = *A.cardinality();
  uint64_t size = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (size > std::numeric_limits<uint64_t>::max() / c) throw RingError("Witt carrier too large to index");
    size *= c;
  }
  return {"W_" + std::to_string(n) + "(" + A.descriptor() + ")", size, witt_index(WittVector::zero(A, p, n)),
          [A, p, n](uint64_t i) { return witt_at(A, p, n, i).str(); }};
}

FiniteComplex witt_sequence(const Ring& A, int p, int n) {
  if (n < 1) throw WittError("Witt sequence needs n >= 1");
  const std::size_t len = static_cast<std::size_t>(n);
  FiniteComplex c;
  c.name = "witt-sequence(" + A.descriptor() + ", n=" + std::to_string(n) + ")";
  c.carriers = {zero_carrier(), ring_carrier(A), witt_carrier(A, p, len + 1), witt_carrier(A, p, len),
                zero_carrier()};
  const uint64_t a0 = A.index_of(A.zero());
  c.maps.push_back({"0", [a0](uint64_t) { return a0; }});
  c.maps.push_back({"V^n", [A, p, n](uint64_t i) {
                      return witt_index(verschiebung(WittVector(A, p, {A.element_at(i)}), n));
                    }});
  c.maps.push_back({"R", [A, p, len](uint64_t i) { return witt_index(restrict_once(witt_at(A, p, len + 1, i))); }});
  c.maps.push_back({"0", [](uint64_t) { return uint64_t(0); }});
  return c;
}

namespace {

Ring quotient_ring(const Ring& A, int n) { return Ring::cyclotomic(A.prime(), A.depth(), std::min(A.precision(), n)); }

}  // namespace

FiniteComplex exact_rz_sequence(const Ring& A, int n) {
  if (A.kind() != RingKind::Cyclotomic) throw RingError("exact-Rz needs a cyclotomic ring");
  if (A.depth() < n + 1) throw RingError("exact-Rz needs depth N >= n + 1");
  const int p = A.prime();
  const std::size_t len = static_cast<std::size_t>(n);
  const Ring Q = quotient_ring(A, n);
  const WittVector z = z_element(A, n + 1);
  FiniteComplex c;
  c.name = "exact-Rz(" + A.descriptor() + ", n=" + std::to_string(n) + ")";
  auto quotient = ring_carrier(Q);
  quotient.name = "A/p^" + std::to_string(n) + "A";
  c.carriers = {zero_carrier(), ring_carrier(A), witt_carrier(A, p, len + 1), witt_carrier(A, p, len), quotient,
                zero_carrier()};
  const uint64_t a0 = A.index_of(A.zero());
  c.maps.push_back({"0", [a0](uint64_t) { return a0; }});
  c.maps.push_back({"V^n", [A, p, n](uint64_t i) {
                      return witt_index(verschiebung(WittVector(A, p, {A.element_at(i)}), n));
                    }});
  c.maps.push_back({"Rz", [A, p, len, z](uint64_t i) {
                      return witt_index(restrict_once(z * witt_at(A, p, len + 1, i)));
                    }});
  c.maps.push_back({"F^n", [A, Q, p, n, len](uint64_t i) {
                      WittVector w = witt_at(A, p, len, i);
                      std::vector<Element> lift = w.coords();
                      lift.push_back(A.zero());
                      Element top = frobenius(WittVector(A, p, std::move(lift)), n)[0];
                      return Q.index_of(Q.from_coeffs(top.coeffs()));
                    }});
  c.maps.push_back({"0", [](uint64_t) { return uint64_t(0); }});
  return c;
}

CheckReport exact_rz_report(const Ring& A, int n, const ExactnessOptions& opt) {
  FiniteComplex c = exact_rz_sequence(A, n);
  auto slots = exactness_slots(c, opt);
  CheckReport rep;
  rep.suite = c.name;
  const int p = A.prime();
  for (const auto& v : slots) {
    CheckResult r = slot_result(c, v);
    r.anchor = "exact-Rz: kernel equals image at " + c.carriers[v.index].name;
    if (v.exhaustive && v.composite_zero && !v.exact()) {
      if (v.index == 2) {
        // ker Rz / V^n(A) against the annihilator of the first coordinate of z_{n+1}.
        const Element z0 = z_element(A, n + 1)[0];
        auto ann = solve_multiplication(A.zero(), z0);
        const uint64_t ann_size = ann ? ann->count() : 0;
        const uint64_t excess = v.image_size ? v.kernel_size / v.image_size : 0;
        r.witness("ker/im order", std::to_string(excess));
        r.witness("|Ann((z_{n+1})_0)|", std::to_string(ann_size));
        if (excess == ann_size && v.kernel_size % v.image_size == 0) {
          r.verdict = Verdict::TruncationLimited;
          r.note("excess kernel is Ann((z_{n+1})_0) x A, which vanishes when z_{n+1} is a non-zero-divisor");
        }
      } else if (v.index == 4 && n == 1) {
        const Ring Q = quotient_ring(A, 1);
        std::vector<uint8_t> frob(*Q.cardinality(), 0);
        for (uint64_t i = 0; i < frob.size(); ++i) frob[Q.index_of(Q.element_at(i).pow(static_cast<uint64_t>(p)))] = 1;
        const uint64_t frob_size = static_cast<uint64_t>(std::count(frob.begin(), frob.end(), 1));
        r.witness("Frobenius image of A/pA", std::to_string(frob_size));
        if (frob_size == v.image_size) {
          r.verdict = Verdict::TruncationLimited;
          r.note("cokernel of F equals the cokernel of Frobenius on A/pA");
        }
      } else if (v.index == 4) {
        r.note("Frobenius defect is only accounted for at n = 1");
      }
    }
    rep.add(std::move(r));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Cyclic complexes from JSON

FiniteComplex cyclic_complex_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  std::vector<uint64_t> groups = j.at("groups").get<std::vector<uint64_t>>();
  std::vector<uint64_t> maps = j.at("maps").get<std::vector<uint64_t>>();
  if (groups.size() != maps.size() + 1) throw std::invalid_argument("cyclic complex needs one map per gap");
  FiniteComplex c;
  c.name = j.value("name", std::string("cyclic complex"));
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const uint64_t n = groups[i];
    if (n == 0) throw std::invalid_argument("cyclic group order must be positive");
    c.carriers.push_back({"C" + std::to_string(i) + "=Z/" + std::to_string(n), n, 0,
                          [](uint64_t x) { return std::to_string(x); }});
  }
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const uint64_t m = maps[i], src = groups[i], dst = groups[i + 1];
    if ((static_cast<unsigned __int128>(m) * src) % dst != 0)
      throw std::invalid_argument("map " + std::to_string(i) + " is not well defined");
    c.maps.push_back({"x" + std::to_string(m), [m, dst](uint64_t x) {
                        return static_cast<uint64_t>((static_cast<unsigned __int128>(m) * x) % dst);
                      }});
  }
  return c;
}

FiniteComplex cyclic_complex_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read complex fixture: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return cyclic_complex_from_json(ss.str());
}

// ---------------------------------------------------------------------------
// Twisted module

TwistedModule::TwistedModule(const Ring& A, int n) : A_(A), n_(n), omega_(MonogenicAlgebra::of_ring(A)) {
  if (n < 1) throw WittError("twisted module needs n >= 1");
}

TwistedModule::Elem TwistedModule::act(const WittVector& y, const Elem& m) const {
  if (y.length() != static_cast<std::size_t>(n_) + 1) throw WittError("scalar must lie in W_{n+1}");
  const Element f = frobenius(y, n_)[0];
  const auto& alg = omega_.algebra();
  const ZVector fv = alg.from_element(f);
  const ZVector fd = fn_d(omega_, y);
  Elem out;
  out.alpha = omega_.sub(omega_.act(fv, m.alpha), omega_.act(alg.from_element(m.a), fd));
  out.a = f * m.a;
  return out;
}

TwistedModule::Elem TwistedModule::add(const Elem& x, const Elem& y) const {
  return {omega_.add(x.alpha, y.alpha), x.a + y.a};
}

bool TwistedModule::equal(const Elem& x, const Elem& y) const { return x.a == y.a && omega_.equal(x.alpha, y.alpha); }

TwistedModule::Elem TwistedModule::random(Rng& rng) const {
  return {omega_.algebra().from_element(A_.random(rng)), A_.random(rng)};
}

WittVector TwistedModule::random_scalar(Rng& rng) const {
  std::vector<Element> c;
  for (int i = 0; i <= n_; ++i) c.push_back(A_.random(rng));
  return WittVector(A_, A_.prime(), std::move(c));
}

std::string TwistedModule::str(const Elem& m) const { return "(" + omega_.str(m.alpha) + ", " + m.a.str() + ")"; }

CheckReport check_twisted_module(const Ring& A, int n, Rng& rng, int triples) {
  CheckReport rep;
  rep.suite = "twisted-module";
  TwistedModule T(A, n);
  const auto& omega = T.omega();
  const auto& alg = omega.algebra();
  const int p = A.prime();
  const std::size_t len = static_cast<std::size_t>(n) + 1;
  auto meta = [&](CheckResult& r) {
    r.meta("ring", A.descriptor()).meta("n", std::to_string(n)).meta("samples", std::to_string(triples));
  };

  CheckResult ax;
  ax.id = "module-axioms(n=" + std::to_string(n) + ")";
  ax.anchor = "y (alpha, a) = (F^n(y) alpha - a F^n(dy), F^n(y) a) defines a W_{n+1}(A)-module";
  meta(ax);
  const WittVector one = WittVector::one(A, p, len);
  for (int t = 0; t < triples && ax.verdict == Verdict::Pass; ++t) {
    WittVector y = T.random_scalar(rng), z = T.random_scalar(rng);
    auto m = T.random(rng), m2 = T.random(rng);
    const bool assoc = T.equal(T.act(y * z, m), T.act(y, T.act(z, m)));
    const bool dist_s = T.equal(T.act(y + z, m), T.add(T.act(y, m), T.act(z, m)));
    const bool dist_m = T.equal(T.act(y, T.add(m, m2)), T.add(T.act(y, m), T.act(y, m2)));
    const bool unit = T.equal(T.act(one, m), m);
    if (!(assoc && dist_s && dist_m && unit)) {
      ax.verdict = Verdict::Fail;
      ax.witness("y", y.str()).witness("z", z.str()).witness("m", T.str(m));
    }
  }
  rep.add(std::move(ax));

  CheckResult vr;
  vr.id = "V^n(1)-action(n=" + std::to_string(n) + ")";
  vr.anchor = "V^n(1) (alpha, a) = (p^n alpha, p^n a)";
  meta(vr);
  std::vector<Element> vc(len, A.zero());
  vc.back() = A.one();
  const WittVector v1(A, p, vc);
  const mpz_class pn = pow_ui(p, static_cast<unsigned long>(n));
  for (int t = 0; t < triples && vr.verdict == Verdict::Pass; ++t) {
    auto m = T.random(rng);
    TwistedModule::Elem expect{omega.scale(m.alpha, pn), m.a.scaled(pn)};
    if (!T.equal(T.act(v1, m), expect)) {
      vr.verdict = Verdict::Fail;
      vr.witness("m", T.str(m));
    }
    if (n == 1) {
      // V(1) V(1) = p V(1).
      TwistedModule::Elem lhs = T.act(v1 * v1, m);
      TwistedModule::Elem rhs = T.act(v1, m);
      rhs = {omega.scale(rhs.alpha, p), rhs.a.scaled(p)};
      if (!T.equal(lhs, rhs)) {
        vr.verdict = Verdict::Fail;
        vr.witness("V(1)V(1) m", T.str(lhs));
      }
    }
  }
  rep.add(std::move(vr));

  CheckResult lb;
  lb.id = "F^n d Leibniz(n=" + std::to_string(n) + ")";
  lb.anchor = "F^n d(xw) = F^n(x) F^n(dw) + F^n(w) F^n(dx)";
  meta(lb);
  for (int t = 0; t < triples && lb.verdict == Verdict::Pass; ++t) {
    WittVector x = T.random_scalar(rng), w = T.random_scalar(rng);
    const ZVector fx = alg.from_element(frobenius(x, n)[0]), fw = alg.from_element(frobenius(w, n)[0]);
    ZVector rhs = omega.add(omega.act(fx, fn_d(omega, w)), omega.act(fw, fn_d(omega, x)));
    if (!omega.equal(fn_d(omega, x * w), rhs)) {
      lb.verdict = Verdict::Fail;
      lb.witness("x", x.str()).witness("w", w.str());
    }
  }
  rep.add(std::move(lb));

  CheckResult pf;
  pf.id = "projection-formula(n=" + std::to_string(n) + ")";
  pf.anchor = "x V^n(y) = V^n(F^n(x) y)";
  meta(pf);
  for (int t = 0; t < triples && pf.verdict == Verdict::Pass; ++t) {
    WittVector x = T.random_scalar(rng);
    WittVector y(A, p, {A.random(rng)});
    if (x * verschiebung(y, n) != verschiebung(frobenius(x, n) * y, n)) {
      pf.verdict = Verdict::Fail;
      pf.witness("x", x.str()).witness("y", y.str());
    }
  }
  rep.add(std::move(pf));

  if (A.depth() >= n + 1) {
    CheckResult tc;
    tc.id = "teichmuller-action(n=" + std::to_string(n) + ")";
    tc.anchor = "[c] (alpha, a) = (c^{p^n} alpha - a c^{p^n - 1} dc, c^{p^n} a) for c = zeta_{p^{n+1}}";
    meta(tc);
    const Element c = A.zeta(n + 1);
    const ZVector cv = alg.from_element(c);
    const uint64_t pn64 = static_cast<uint64_t>(ipow(p, n));
    const ZVector cpn = alg.pow(cv, pn64);
    const ZVector fd = omega.act(alg.pow(cv, pn64 - 1), omega.d(cv));
    tc.require(alg.equal(cpn, alg.from_element(A.zeta(1))));
    for (int t = 0; t < triples && tc.verdict == Verdict::Pass; ++t) {
      auto m = T.random(rng);
      TwistedModule::Elem expect{omega.sub(omega.act(cpn, m.alpha), omega.act(alg.from_element(m.a), fd)),
                                 alg.to_element(alg.mul(cpn, alg.from_element(m.a)), A)};
      if (!T.equal(T.act(WittVector::teichmuller(c, p, len), m), expect)) {
        tc.verdict = Verdict::Fail;
        tc.witness("m", T.str(m));
      }
    }
    rep.add(std::move(tc));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Witt intersection

WittVector restricted_z(const Ring& A, int n, int s) {
  const int p = A.prime();
  const std::size_t len = static_cast<std::size_t>(n);
  const Element c = A.zeta(n + s);
  WittVector acc = WittVector::zero(A, p, len);
  Element ci = A.one();
  for (int i = 0; i < p; ++i) {
    acc = acc + WittVector::teichmuller(ci, p, len);
    ci *= c;
  }
  return acc;
}

CheckReport check_witt_intersection(const Ring& A, int n, int s_max, Rng& rng, int samples) {
  CheckReport rep;
  rep.suite = "witt-intersection";
  if (A.kind() != RingKind::Cyclotomic || A.depth() < n + s_max)
    throw RingError("Witt intersection needs a cyclotomic ring with N >= n + s_max");
  const int p = A.prime();
  const std::size_t len = static_cast<std::size_t>(n);
  const WittVector one = WittVector::one(A, p, len);
  const WittVector base = WittVector::teichmuller(A.zeta(n), p, len) - one;
  std::vector<WittVector> chains;
  WittVector chain = one;
  for (int s = 1; s <= s_max; ++s) {
    chain = chain * restricted_z(A, n, s);
    chains.push_back(chain);
    CheckResult r;
    r.id = "chain-identity(s=" + std::to_string(s) + ")";
    r.anchor = "R^s(z_{n+s}) ... R(z_{n+1}) ([zeta_{p^{n+s}}] - 1) = [zeta_{p^n}] - 1";
    r.meta("ring", A.descriptor()).meta("n", std::to_string(n));
    const WittVector lhs = chain * (WittVector::teichmuller(A.zeta(n + s), p, len) - one);
    r.require(lhs == base);
    if (lhs != base) r.witness("lhs", lhs.str());
    auto bare = witt_divide(chain, base);
    r.note(std::string("bare chain ") + (bare.status == DivideStatus::Found ? "is" : "is not") +
           " divisible by [zeta_{p^n}] - 1");
    rep.add(std::move(r));
  }

  CheckResult mem;
  mem.id = "intersection-members";
  mem.anchor = "x in every chain_s W_n implies x in ([zeta_{p^n}] - 1) W_n";
  mem.meta("ring", A.descriptor()).meta("n", std::to_string(n)).meta("s_max", std::to_string(s_max));
  mem.meta("samples", std::to_string(samples));
  for (int t = 0; t < samples && mem.verdict == Verdict::Pass; ++t) {
    std::vector<Element> c;
    for (std::size_t i = 0; i < len; ++i) c.push_back(A.random(rng));
    const WittVector w(A, p, c);
    const WittVector x = base * w;
    for (const auto& ch : chains) {
      auto d = witt_divide(x, ch);
      if (d.status != DivideStatus::Found) {
        mem.verdict = Verdict::Fail;
        mem.witness("not in chain multiple", x.str());
      }
    }
    auto q = witt_divide(x, base);
    if (q.status != DivideStatus::Found || base * *q.quotient != x) {
      mem.verdict = Verdict::Fail;
      mem.witness("not divisible", x.str());
    }
  }
  rep.add(std::move(mem));

  CheckResult non;
  non.id = "non-member";
  non.anchor = "1 is not divisible by [zeta_{p^n}] - 1";
  non.meta("ring", A.descriptor()).meta("n", std::to_string(n));
  auto q = witt_divide(one, base);
  non.require(q.status == DivideStatus::NoSolution);
  non.witness("divide status", q.status == DivideStatus::NoSolution ? "no solution" : "found");
  rep.add(std::move(non));
  return rep;
}

}  // namespace wittcheck
