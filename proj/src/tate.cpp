#include "wittcheck/tate.hpp"

#include <algorithm>
#include <unordered_set>

namespace wittcheck {

namespace {

void require_level(const Ring& A, int n, const char* what) {
  if (A.kind() != RingKind::Cyclotomic) throw TateError(std::string(what) + " needs a cyclotomic ring");
  if (n < 1 || n > A.depth())
    throw TateError(std::string(what) + " at level " + std::to_string(n) + " needs N >= " + std::to_string(n) +
                    ", have " + A.descriptor());
}

WittVector zeta_minus_one(const Ring& A, int n, std::size_t length) {
  return WittVector::teichmuller(A.zeta(n), A.prime(), length) - WittVector::one(A, A.prime(), length);
}

}  // namespace

TateElement::TateElement(WittVector scalar) : scalar_(std::move(scalar)) {
  if (scalar_.length() == 0) throw TateError("Tate layers start at level 1");
}

std::string TateElement::str() const { return "(" + scalar_.str() + ") alpha_" + std::to_string(level()); }

TateElement operator+(const TateElement& a, const TateElement& b) {
  if (a.level() != b.level()) throw TateError("adding Tate elements of different levels");
  return TateElement(a.scalar_ + b.scalar_);
}

TateElement operator*(const WittVector& y, const TateElement& x) {
  if (y.length() != x.scalar_.length()) throw TateError("scalar length does not match the Tate level");
  return TateElement(y * x.scalar_);
}

TateElement tate_alpha(const Ring& A, int n) { return TateElement(WittVector::one(A, A.prime(), n)); }

TateElement dlog_element(const Ring& A, int n) {
  require_level(A, n, "dlog_element");
  return TateElement(zeta_minus_one(A, n, static_cast<std::size_t>(n)));
}

TateElement bott_image(const Ring& A, int n) { return dlog_element(A, n); }

TateElement tate_F(const TateElement& x) {
  if (x.level() < 2) throw TateError("F needs level >= 2");
  return TateElement(frobenius(x.scalar()));
}

TateElement tate_R(const TateElement& x) {
  if (x.level() < 2) throw TateError("R needs level >= 2");
  const int n = x.level() - 1;
  require_level(x.ring(), n + 1, "R");
  return TateElement(restrict_once(x.scalar()) * z_element(x.ring(), n + 1, static_cast<std::size_t>(n)));
}

TateTower::TateTower(std::vector<TateElement> layers) : layers_(std::move(layers)) {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (layers_[i].level() != static_cast<int>(i) + 1) throw TateError("tower layer " + std::to_string(i + 1) + " has the wrong level");
    if (i > 0 && tate_F(layers_[i]) != layers_[i - 1])
      throw TateError("tower is not F-compatible at level " + std::to_string(i + 1));
  }
}

TateTower TateTower::truncated(int h) const {
  if (h > height()) throw TateError("cannot extend a tower by truncation");
  return TateTower(std::vector<TateElement>(layers_.begin(), layers_.begin() + h));
}

std::string TateTower::str() const {
  std::string s = "tower[";
  for (std::size_t i = 0; i < layers_.size(); ++i) s += (i ? "; " : "") + layers_[i].scalar().str();
  return s + "]";
}

TateTower alpha_tower(const Ring& A, int h) {
  std::vector<TateElement> l;
  for (int n = 1; n <= h; ++n) l.push_back(tate_alpha(A, n));
  return TateTower(std::move(l));
}

TateTower dlog_tower(const Ring& A, int h) {
  std::vector<TateElement> l;
  for (int n = 1; n <= h; ++n) l.push_back(dlog_element(A, n));
  return TateTower(std::move(l));
}

TateTower bott_image_limit(const Ring& A, int h) { return dlog_tower(A, h); }

TateTower tower_from_top(const WittVector& y) {
  const int h = static_cast<int>(y.length());
  std::vector<TateElement> l;
  for (int n = 1; n <= h; ++n) l.push_back(TateElement(frobenius(y, h - n)));
  return TateTower(std::move(l));
}

TateTower tower_restrict(const TateTower& x) {
  if (x.height() < 2) throw TateError("R on a tower needs height >= 2");
  std::vector<TateElement> l;
  for (int n = 1; n < x.height(); ++n) l.push_back(tate_R(x.layer(n + 1)));
  return TateTower(std::move(l));
}

TateTower tower_act(const TiltWittVector& t, const TateTower& x) {
  std::vector<TateElement> l;
  for (const auto& layer : x.layers()) {
    if (!(t.base() == layer.ring())) throw TateError("tilt scalar over a different base ring");
    l.push_back(theta_tilde(t, layer.level()) * layer);
  }
  return TateTower(std::move(l));
}

// ---------------------------------------------------------------------------
// Checks

CheckResult check_tate_freeness(const Ring& A, int n, uint64_t budget) {
  CheckResult r;
  r.id = "freeness(n=" + std::to_string(n) + ")";
  r.anchor = "y alpha_n = 0 implies y = 0; scalars are unique";
  r.meta("ring", A.descriptor()).meta("n", std::to_string(n));
  auto size = A.cardinality();
  uint64_t total = 1;
  bool fits = size.has_value();
  for (int i = 0; fits && i < n; ++i) {
    if (total > budget / *size) fits = false;
    else total *= *size;
  }
  if (!fits) {
    r.verdict = Verdict::TruncationLimited;
    r.note("W_n(A) exceeds the exhaustive budget");
    return r;
  }
  const std::size_t len = static_cast<std::size_t>(n);
  const TateElement a = tate_alpha(A, n);
  std::unordered_set<std::string> seen;
  uint64_t zeros = 0;
  for (uint64_t idx = 0; idx < total; ++idx) {
    std::vector<Element> c;
    uint64_t k = idx;
    for (std::size_t i = 0; i < len; ++i) {
      c.push_back(A.element_at(k % *size));
      k /= *size;
    }
    const TateElement x = WittVector(A, A.prime(), c) * a;
    if (x.is_zero()) ++zeros;
    seen.insert(x.str());
  }
  r.witness("elements", std::to_string(total)).witness("distinct images", std::to_string(seen.size()));
  r.require(zeros == 1 && seen.size() == total);
  r.meta("mode", "exhaustive");
  return r;
}

CheckReport check_tate_tower(const Ring& A, int h, Rng& rng, int samples, uint64_t budget) {
  if (h < 2) throw TateError("Tate tower checks need height >= 2");
  require_level(A, h, "Tate tower");
  // theta~_h on length-h tilt scalars reads lift 2h-1; one addition costs delta.
  if (A.depth() < 2 * h - 1 + default_tilt_delta(A))
    throw TateError("Tate tower of height " + std::to_string(h) + " needs N >= " +
                    std::to_string(2 * h - 1 + default_tilt_delta(A)) + ", have " + A.descriptor());
  CheckReport rep;
  rep.suite = "tate-tower";
  const int p = A.prime();
  auto base = [&](std::string id, std::string anchor) {
    CheckResult c;
    c.id = std::move(id);
    c.anchor = std::move(anchor);
    c.meta("ring", A.descriptor()).meta("height", std::to_string(h));
    return c;
  };

  CheckResult af = base("F(alpha)", "F(alpha_{n+1}) = alpha_n");
  CheckResult ar = base("R(alpha)", "R(alpha_{n+1}) = R(z_{n+1}) alpha_n");
  CheckResult df = base("F(dlog)", "F(([zeta_{p^{n+1}}]-1) alpha_{n+1}) = ([zeta_{p^n}]-1) alpha_n");
  CheckResult dr = base("R(dlog)", "R(([zeta_{p^{n+1}}]-1) alpha_{n+1}) = ([zeta_{p^n}]-1) alpha_n");
  CheckResult ratio = base("ratio-identity", "([zeta_{p^{n+1}}]-1) R(z_{n+1}) = [zeta_{p^n}]-1 in W_n(A)");
  for (int n = 1; n < h; ++n) {
    const std::size_t len = static_cast<std::size_t>(n);
    const std::string lv = "n=" + std::to_string(n);
    if (tate_F(tate_alpha(A, n + 1)) != tate_alpha(A, n)) af.require(false).witness(lv, "F(alpha) != alpha");
    const WittVector rz = z_element(A, n + 1, len);
    if (tate_R(tate_alpha(A, n + 1)).scalar() != rz) ar.require(false).witness(lv, "R(alpha) != R(z) alpha");
    if (tate_F(dlog_element(A, n + 1)) != dlog_element(A, n))
      df.require(false).witness(lv, tate_F(dlog_element(A, n + 1)).str());
    if (tate_R(dlog_element(A, n + 1)) != dlog_element(A, n))
      dr.require(false).witness(lv, tate_R(dlog_element(A, n + 1)).str());
    // Oracle: the product computed from scratch in W_n(A).
    const WittVector lhs = zeta_minus_one(A, n + 1, len) * rz;
    if (lhs != zeta_minus_one(A, n, len)) ratio.require(false).witness(lv, lhs.str());
  }
  rep.add(std::move(af));
  rep.add(std::move(ar));
  rep.add(std::move(df));
  rep.add(std::move(dr));
  rep.add(std::move(ratio));

  // F R = R F on towers generated from random tops.
  CheckResult fr = base("FR=RF", "F R = R F on tower elements");
  fr.meta("samples", std::to_string(samples));
  for (int s = 0; s < samples && fr.passed(); ++s) {
    std::vector<Element> c;
    for (int i = 0; i < h; ++i) c.push_back(A.random(rng));
    const WittVector y(A, p, c);
    try {
      tower_restrict(tower_from_top(y));
    } catch (const TateError& e) {
      fr.require(false).witness("top", y.str()).note(e.what());
    }
  }
  rep.add(std::move(fr));

  // R(alpha) = xi alpha with xi = ([eps]-1)/([eps^{1/p}]-1), as far as the tilt depth reaches.
  CheckResult rx = base("R(alpha)=xi*alpha", "R(alpha) = (([eps]-1)/([eps^{1/p}]-1)) alpha");
  const int M = A.precision();
  int reached = 0;
  for (int k = h - 1; k >= 1 && reached == 0; --k) {
    try {
      const TiltWittVector xi = xi_element(A, A.depth(), static_cast<std::size_t>(k + M - 1));
      const TateTower lhs = tower_restrict(alpha_tower(A, k + 1));
      const TateTower rhs = tower_act(xi, alpha_tower(A, k));
      rx.require(lhs == rhs);
      if (lhs != rhs) rx.witness("R(alpha)", lhs.str()).witness("xi alpha", rhs.str());
      reached = k;
    } catch (const TiltError&) {
    }
  }
  if (reached == 0) {
    rx.verdict = Verdict::TruncationLimited;
    rx.note("tilt depth too small for xi at level 1");
  } else {
    rx.meta("levels", std::to_string(reached));
    if (reached < h - 1) rx.note("checked through level " + std::to_string(reached) + " at this tilt depth");
  }
  rep.add(std::move(rx));

  // Twist law R(t x) = phi^{-1}(t) R(x).
  CheckResult tw = base("twist-law", "R(t x) = phi^{-1}(t) R(x)");
  const int depth = A.depth() - default_tilt_delta(A);
  tw.meta("tilt depth", std::to_string(depth)).meta("samples", std::to_string(samples));
  auto twist = [&](const TiltWittVector& t, const TateTower& x, const std::string& label) {
    try {
      const TateTower lhs = tower_restrict(tower_act(t, x));
      const TateTower rhs = tower_act(witt_frobenius_inverse(t), tower_restrict(x));
      if (lhs != rhs) {
        tw.require(false).witness(label + " t", t.str()).witness(label + " x", x.str());
        return false;
      }
    } catch (const std::invalid_argument& e) {
      tw.require(false).witness(label, e.what());
      return false;
    }
    return true;
  };
  const TiltElement eps = TiltElement::epsilon(A, A.depth());
  twist(TiltWittVector::teichmuller(eps, 1), alpha_tower(A, h), "[eps]");
  twist(TiltWittVector::from_int(A, depth, static_cast<std::size_t>(h), p), alpha_tower(A, h), "p");
  for (int s = 0; s < samples && tw.passed(); ++s) {
    std::vector<Element> c;
    for (int i = 0; i < h; ++i) c.push_back(A.random(rng));
    const TateTower x = tower_from_top(WittVector(A, p, c));
    twist(random_tilt_vector(A, depth, static_cast<std::size_t>(h), rng), x, "sample " + std::to_string(s));
  }
  // phi^{-1}([eps]) = [eps^{1/p}] on the nose.
  tw.require(witt_frobenius_inverse(TiltWittVector::teichmuller(eps, 1))[0] == frobenius_flat_inverse(eps));
  rep.add(std::move(tw));

  // Bott image: ([eps]-1) alpha, cross-checked with log_q([eps]) alpha.
  CheckResult bott = base("bott-image", "beta_eps -> ([zeta_{p^n}]-1) alpha_n and ([eps]-1) alpha = log_q([eps]) alpha");
  const TateTower b = bott_image_limit(A, h);
  for (int n = 1; n <= h; ++n) bott.require(b.layer(n) == bott_image(A, n));
  for (int n = 1; n < h; ++n) bott.require(tate_F(bott_image(A, n + 1)) == bott_image(A, n));
  try {
    const std::size_t len = static_cast<std::size_t>(h + M - 1);
    const TiltWittVector q = TiltWittVector::teichmuller(TiltElement::epsilon(A, A.depth()), len);
    const TiltWittVector lg = q_log_tilt(q, q, 5, default_tilt_delta(A));
    const TateTower via_log = tower_act(lg, alpha_tower(A, h));
    bott.require(via_log == b);
    bott.witness("log_q([eps]) alpha", via_log.str());
  } catch (const TiltError& e) {
    bott.verdict = Verdict::TruncationLimited;
    bott.note(std::string("q-log cross-check skipped: ") + e.what());
  }
  rep.add(std::move(bott));

  for (int n = 1; n <= std::min(h, 2); ++n) {
    CheckResult fz = check_tate_freeness(A, n, budget);
    if (fz.verdict != Verdict::TruncationLimited) rep.add(std::move(fz));
  }
  return rep;
}

CheckReport check_R_fixed_points(const Ring& A, int h, int n_max, int K_small, int K_large, uint64_t budget) {
  if (h < 2) throw TateError("R fixed points need height >= 2");
  require_level(A, h, "R fixed points");
  CheckReport rep;
  rep.suite = "fixed-points";
  const int p = A.prime();
  auto fixed = [&](const TateTower& x) { return tower_restrict(x) == x.truncated(x.height() - 1); };

  CheckResult d;
  d.id = "R(dlog)=dlog";
  d.anchor = "([eps]-1) alpha is fixed by R";
  d.meta("ring", A.descriptor()).meta("height", std::to_string(h));
  d.require(fixed(dlog_tower(A, h)));
  const std::vector<Element> zeros(static_cast<std::size_t>(h), A.zero());
  d.require(fixed(tower_from_top(WittVector(A, p, zeros))));
  d.witness("zero tower", "fixed");
  rep.add(std::move(d));

  for (int n = 1; n <= n_max; ++n) {
    CheckResult c;
    c.id = "W_" + std::to_string(n) + "(F_p)([eps]-1)alpha fixed";
    c.anchor = "c([eps]-1) alpha is fixed by R for every c in W_n(F_p)";
    c.meta("ring", A.descriptor()).meta("height", std::to_string(h)).meta("n", std::to_string(n));
    const int depth = 2 * h + n;
    uint64_t total = 1;
    for (int i = 0; i < n; ++i) total *= static_cast<uint64_t>(p);
    const TateTower dl = dlog_tower(A, h);
    for (uint64_t idx = 0; idx < total; ++idx) {
      std::vector<TiltElement> coords;
      std::string label;
      uint64_t k = idx;
      for (int i = 0; i < n; ++i) {
        const int64_t ci = static_cast<int64_t>(k % static_cast<uint64_t>(p));
        k /= static_cast<uint64_t>(p);
        coords.push_back(TiltElement::from_int(A, depth, ci));
        label += (i ? "," : "") + std::to_string(ci);
      }
      if (!fixed(tower_act(TiltWittVector(coords), dl))) {
        c.require(false).witness("c", "(" + label + ")");
        break;
      }
    }
    c.meta("cases", std::to_string(total));
    rep.add(std::move(c));
  }

  // Char-p model: R(y alpha) = y alpha iff phi(y) = (([eps^p]-1)/([eps]-1)) y.
  CheckReport cp = check_fixed_points(p, K_small, K_large, budget);
  for (auto& r : cp.checks) {
    if (r.id.rfind("solutions", 0) == 0) r.note("each solution y gives the R-fixed element y alpha");
    rep.add(std::move(r));
  }
  return rep;
}

}  // namespace wittcheck
