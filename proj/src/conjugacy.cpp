#include "hypslp/conjugacy.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>
#include <unordered_map>

#include "hypslp/errors.hpp"
#include "hypslp/slp.hpp"
#include "hypslp/strings.hpp"

namespace hypslp {

namespace {

constexpr Ref kUnset = UINT32_MAX;

// Solution sets of exponent constraints: everything, R mod T, {R}, nothing.
struct Solutions {
  enum Kind { all, periodic, single, none } kind = all;
  int64_t R = 0, T = 0;

  void add(const Trichotomy& c) {
    if (kind == none) return;
    if (c.kind == Trichotomy::none) {
      kind = none;
    } else if (c.kind == Trichotomy::unique) {
      if (kind == all || (kind == periodic && mod(c.r - R, T) == 0) || (kind == single && R == c.r)) {
        kind = single;
        R = c.r;
      } else {
        kind = none;
      }
    } else if (kind == all) {
      kind = periodic;
      R = c.r;
      T = c.t;
    } else if (kind == single) {
      if (mod(R - c.r, c.t) != 0) kind = none;
    } else {
      crt(c.r, c.t);
    }
  }
  std::optional<int64_t> pick() const {
    if (kind == none) return std::nullopt;
    return kind == all ? 0 : R;
  }

  static int64_t mod(int64_t a, int64_t m) { return ((a % m) + m) % m; }

 private:
  void crt(int64_t r, int64_t t) {
    const int64_t g = std::gcd(T, t);
    if (mod(r - R, g) != 0) {
      kind = none;
      return;
    }
    // Solve T k = r - R (mod t).
    const int64_t tg = t / g;
    __int128 k = 0;
    if (tg > 1) {
      int64_t a = mod(T / g, tg), inv = 1;
      // Extended Euclid for the inverse of a modulo tg.
      int64_t old_r = a, rr = tg, old_s = 1, s = 0;
      while (rr != 0) {
        int64_t q = old_r / rr;
        std::tie(old_r, rr) = std::make_pair(rr, old_r - q * rr);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
      }
      inv = mod(old_s, tg);
      k = static_cast<__int128>(mod((r - R) / g, tg)) * inv % tg;
    }
    __int128 nt = static_cast<__int128>(T / g) * t;
    if (nt > INT64_MAX) fail(Errc::search_budget_exceeded, "exponent modulus overflows 64 bits");
    __int128 nr = (static_cast<__int128>(R) + static_cast<__int128>(T) * k) % nt;
    if (nr < 0) nr += nt;
    T = static_cast<int64_t>(nt);
    R = static_cast<int64_t>(nr);
  }
};

class Solver {
 public:
  Solver(const GroupOracle& g, const ConjugacyConfig& cfg) : g_(g), cfg_(cfg), st_(*g.alphabet()), sl_(st_, g) {}

  Store& st() { return st_; }
  Shortlex& sl() { return sl_; }
  AuditTrail& audit() { return audit_; }

  Ref load(const Program& p) { return sl_.reduce(eval_to_store(sl_, p)); }
  Program out(Ref r) { return from_store(st_, r, g_.alphabet()); }
  Ref mul(Ref a, Ref b) { return sl_.combine(a, b); }
  Ref mul(Ref a, Ref b, Ref c) { return mul(mul(a, b), c); }
  Ref inv(Ref a) { return sl_.reduce(st_.inverse(a)); }
  Ref word(const Word& w) { return st_.word(g_.slex_short(w)); }
  // x^-1 u x
  Ref conj(Ref u, Ref x) { return mul(inv(x), u, x); }
  Ref pow(Ref y, int64_t n) {
    if (n == 0) return kEmpty;
    Ref base = n > 0 ? y : inv(y);
    uint64_t k = n > 0 ? static_cast<uint64_t>(n) : static_cast<uint64_t>(-(n + 1)) + 1;
    return sl_.reduce(st_.power(base, k));
  }
  bool infinite(Ref x) { return !sl_.order(x); }

  struct Rotated {
    Ref c, x;  // c = x^-1 u x
  };
  Rotated rotate(Ref u) {
    const uint64_t h = st_.length(u) / 2;
    Ref l = st_.prefix(u, h);
    return {mul(st_.suffix(u, h), l), l};
  }

  struct Straight {
    Ref g = kEmpty;
    Word gw;
    uint64_t m = 0;
    Ref us = kEmpty;  // slex(g^-1 u g)
    Ref z = kEmpty;   // us^m
  };
  Straight straight(Ref uc) {
    const auto& B4 = g_.ball(std::min<uint32_t>(4 * g_.delta(), g_.max_radius()));
    const uint64_t m_max = g_.constants().m_max;
    std::vector<Ref> us(B4.size(), kUnset), zp(B4.size(), kEmpty);
    DfaRunner& run = sl_.shortlex_runner();
    for (uint64_t m = 1; m <= m_max; ++m) {
      for (size_t i = 0; i < B4.size(); ++i) {
        if (us[i] == kUnset) us[i] = conj(uc, word(B4[i]));
        zp[i] = m == 1 ? us[i] : mul(zp[i], us[i]);
        if (zp[i] != kEmpty && all_powers_accepted(run, zp[i])) {
          audit_.push_back({"straight", "g=" + g_.alphabet()->format(B4[i]) + " m=" + std::to_string(m)});
          return {word(B4[i]), B4[i], m, us[i], zp[i]};
        }
      }
    }
    fail(Errc::search_budget_exceeded, "no shortlex straight power within the bounds");
  }

  std::pair<Ref, uint64_t> root(Ref z) {
    Ref zz = st_.concat(z, z);
    auto pos = find_factor(st_, z, st_.suffix(zz, 1));
    if (!pos) fail(Errc::assertion_failure, "z does not occur in z z");
    const uint64_t p = *pos + 1;
    return {st_.prefix(z, p), st_.length(z) / p};
  }

  std::vector<Ref> candidates(Ref z) {
    std::vector<Ref> cz;
    for (const Word& h : g_.ball(2 * g_.delta())) {
      Ref hr = word(h), hz = mul(hr, z, inv(hr));
      if (st_.length(hz) != st_.length(z)) continue;
      auto i = rotation_offset(st_, hz, z);
      if (!i) continue;
      Ref c = mul(st_.prefix(z, *i), hr);
      if (std::find(cz.begin(), cz.end(), c) == cz.end()) cz.push_back(c);
    }
    return cz;
  }

  Trichotomy exponents(Ref u, Ref v, Ref y);
  std::optional<int64_t> side_search(Ref u, Ref v, Ref y, int sign, int64_t W);

  void verify(Ref u, Ref v, Ref w) {
    if (conj(u, w) != v) fail(Errc::assertion_failure, "conjugator failed verification");
  }

  std::optional<Ref> conjugate(Ref u, Ref v);
  std::optional<Ref> simultaneous(std::vector<Ref> us, std::vector<Ref> vs);
  std::vector<Ref> centralizer(const std::vector<Ref>& us);

 private:
  std::optional<Ref> finite_order_search(const std::vector<Ref>& us, const std::vector<Ref>& vs);
  std::vector<Ref> finite_centralizer(const std::vector<Ref>& us);

  const GroupOracle& g_;
  const ConjugacyConfig& cfg_;
  Store st_;
  Shortlex sl_;
  AuditTrail audit_;
};

Trichotomy Solver::exponents(Ref u, Ref v, Ref y) {
  Trichotomy res;
  std::vector<int64_t> hits;
  const Ref yi = inv(y);
  if (auto* f = dynamic_cast<const FiniteGroup*>(&g_)) {
    const uint64_t ord = f->element_order(f->element(st_.expand(y)));
    Ref c = u;
    for (uint64_t j = 0; j < ord; ++j, c = mul(yi, c, y))
      if (c == v) hits.push_back(static_cast<int64_t>(j));
    audit_.push_back({"exponent", "finite-modulo-order"});
    if (hits.empty()) return res;
    res.kind = Trichotomy::periodic;
    res.r = hits[0];
    res.t = hits.size() > 1 ? hits[1] - hits[0] : static_cast<int64_t>(ord);
    return res;
  }
  const int64_t W = 2 * static_cast<int64_t>(g_.ball(2 * g_.delta()).size());
  Ref c = u;
  for (int64_t j = 0; j <= W; ++j, c = mul(yi, c, y))
    if (c == v) hits.push_back(j);
  c = mul(y, u, yi);
  for (int64_t j = -1; j >= -W; --j, c = mul(y, c, yi))
    if (c == v) hits.push_back(j);
  std::sort(hits.begin(), hits.end());
  if (hits.size() >= 2) {
    int64_t t = hits[1] - hits[0];
    for (size_t i = 2; i < hits.size(); ++i) t = std::min(t, hits[i] - hits[i - 1]);
    for (int64_t h : hits)
      if (Solutions::mod(h - hits[0], t) != 0) fail(Errc::assertion_failure, "exponent solutions are not periodic");
    res.kind = Trichotomy::periodic;
    res.t = t;
    res.r = Solutions::mod(hits[0], t);
    return res;
  }
  if (hits.size() == 1) {
    res.kind = Trichotomy::unique;
    res.r = hits[0];
    return res;
  }
  for (int sign : {1, -1}) {
    if (auto r = side_search(u, v, y, sign, W)) {
      res.kind = Trichotomy::unique;
      res.r = *r;
      return res;
    }
  }
  return res;
}

// Solutions j with |j| > W on one side.  f(j) = |slex(y^-j u y^j)| is
// treated as quasi-convex: gallop until f grows past |v|, then inspect
// windows around the minimum and around the crossings of |v|.
std::optional<int64_t> Solver::side_search(Ref u, Ref v, Ref y, int sign, int64_t W) {
  const int64_t N = static_cast<int64_t>(std::min<uint64_t>(cfg_.n_max, INT64_MAX / 4));
  const uint64_t Lv = st_.length(v);
  auto at = [&](int64_t j) { return conj(u, pow(y, sign * j)); };
  std::unordered_map<int64_t, uint64_t> memo;
  auto f = [&](int64_t j) {
    auto it = memo.find(j);
    if (it != memo.end()) return it->second;
    return memo[j] = st_.length(at(j));
  };
  const int64_t lo = W + 1;
  if (lo > N) return std::nullopt;
  int64_t j = lo, prev = -1;
  for (;;) {
    const uint64_t fj = f(j);
    if (prev >= 0 && fj > Lv && fj > f(prev)) break;
    if (j >= N) fail(Errc::search_budget_exceeded, "exponent search reached n_max");
    prev = j;
    j = std::min(2 * j, N);
  }
  const int64_t hi = j;
  // Minimum of f on [lo, hi].
  int64_t a = lo, b = hi;
  while (b - a > 2) {
    int64_t m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
    if (f(m1) <= f(m2))
      b = m2;
    else
      a = m1;
  }
  int64_t jmin = a;
  for (int64_t k = a; k <= b; ++k)
    if (f(k) < f(jmin)) jmin = k;
  std::vector<int64_t> centers{jmin};
  // First j > jmin with f(j) >= |v|.
  {
    int64_t x = jmin, z = hi;
    while (z - x > 1) {
      int64_t m = x + (z - x) / 2;
      (f(m) >= Lv ? z : x) = m;
    }
    centers.push_back(z);
  }
  // Last j < jmin with f(j) >= |v|.
  if (f(lo) >= Lv) {
    int64_t x = lo, z = jmin;
    while (z - x > 1) {
      int64_t m = x + (z - x) / 2;
      (f(m) >= Lv ? x : z) = m;
    }
    centers.push_back(x);
  }
  const Ref ys = sign > 0 ? y : inv(y), ysi = sign > 0 ? inv(y) : y;
  for (int64_t c : centers) {
    const int64_t s = std::max(lo, c - W), e = std::min(hi, c + W);
    Ref cur = at(s);
    for (int64_t k = s; k <= e; ++k, cur = mul(ysi, cur, ys))
      if (cur == v) return sign * k;
  }
  return std::nullopt;
}

std::optional<Ref> Solver::conjugate(Ref u, Ref v) {
  Rotated pu = rotate(u), pv = rotate(v);
  const ConjConstants cc = g_.constants();
  const uint64_t lu = st_.length(pu.c), lv = st_.length(pv.c);
  if (lu <= cc.K && lv <= cc.K) {
    audit_.push_back({"step", "3-explicit"});
    auto g = g_.explicit_conjugacy(st_.expand(pu.c), st_.expand(pv.c));
    if (!g) return std::nullopt;
    Ref w = mul(pu.x, word(*g), inv(pv.x));
    verify(u, v, w);
    return w;
  }
  if (lu < 2 * cc.L + 1 || lv < 2 * cc.L + 1) {
    audit_.push_back({"step", "3-length"});
    return std::nullopt;
  }
  Straight s = straight(pu.c);
  // Step 5: match a conjugate of v^m against rotations of z.
  const Ref vm = pow(pv.c, static_cast<int64_t>(s.m));
  std::optional<Ref> vnew, yconj;
  for (const Word& h : g_.ball(6 * g_.delta())) {
    Ref hr = word(h), vh = mul(hr, vm, inv(hr));
    if (st_.length(vh) != st_.length(s.z)) continue;
    auto i = rotation_offset(st_, vh, s.z);
    if (!i) continue;
    Ref step = inv(mul(st_.prefix(s.z, *i), hr));
    vnew = conj(pv.c, step);
    yconj = mul(pv.x, step);
    audit_.push_back({"step5", "h=" + g_.alphabet()->format(h)});
    break;
  }
  if (!vnew) {
    audit_.push_back({"step", "5-no-rotation"});
    return std::nullopt;
  }
  auto [y, ell] = root(s.z);
  (void)ell;
  const std::vector<Ref> cz = candidates(s.z);
  const Ref xu = mul(pu.x, s.g);
  for (Ref zp : cz) {
    Ref w = conj(*vnew, inv(zp));
    std::optional<int64_t> n;
    if (g_.kind() == GroupKind::free) {
      // The centralizer of z is cyclic, so u and w commute with y.
      if (s.us == w) n = 0;
      audit_.push_back({"step8", "free-cyclic"});
    } else {
      Solutions sol;
      sol.add(exponents(s.us, w, y));
      n = sol.pick();
      audit_.push_back({"step8", "exponent-search"});
    }
    if (!n) continue;
    Ref g = mul(pow(y, *n), zp);
    Ref wt = mul(xu, g, inv(*yconj));
    verify(u, v, wt);
    return wt;
  }
  audit_.push_back({"step", "8-exhausted"});
  return std::nullopt;
}

std::optional<Ref> Solver::finite_order_search(const std::vector<Ref>& us, const std::vector<Ref>& vs) {
  if (g_.kind() == GroupKind::free) {
    audit_.push_back({"path", "finite-order-free"});
    for (size_t i = 0; i < us.size(); ++i)
      if (us[i] != kEmpty || vs[i] != kEmpty) return std::nullopt;
    return kEmpty;
  }
  const bool finite = g_.kind() == GroupKind::finite;
  audit_.push_back({"path", finite ? "finite-order-table" : "finite-order-ball"});
  const auto& cands = g_.ball(finite ? g_.delta() : g_.max_radius());
  for (const Word& x : cands) {
    Ref xr = word(x);
    bool ok = true;
    for (size_t i = 0; i < us.size() && ok; ++i) ok = conj(us[i], xr) == vs[i];
    if (ok) return xr;
  }
  if (!finite) fail(Errc::search_budget_exceeded, "no conjugator in the largest available ball");
  return std::nullopt;
}

std::optional<Ref> Solver::simultaneous(std::vector<Ref> us, std::vector<Ref> vs) {
  if (us.size() != vs.size()) fail(Errc::invalid_program, "conjugacy lists differ in length");
  if (us.empty()) return kEmpty;
  size_t pick = us.size();
  for (size_t i = 0; i < us.size() && pick == us.size(); ++i)
    if (infinite(us[i])) pick = i;
  if (pick == us.size()) {
    for (Ref v : vs)
      if (infinite(v)) return std::nullopt;
    return finite_order_search(us, vs);
  }
  audit_.push_back({"path", "infinite-order"});
  std::swap(us[0], us[pick]);
  std::swap(vs[0], vs[pick]);
  if (!infinite(vs[0])) return std::nullopt;
  auto g0 = conjugate(us[0], vs[0]);
  if (!g0) return std::nullopt;
  Rotated pv = rotate(vs[0]);
  Straight s = straight(pv.c);
  const Ref Q = mul(pv.x, s.g), P = mul(*g0, Q);
  std::vector<Ref> ut, vt;
  for (size_t i = 0; i < us.size(); ++i) {
    ut.push_back(conj(us[i], P));
    vt.push_back(conj(vs[i], Q));
  }
  auto [y, ell] = root(s.z);
  (void)ell;
  for (Ref zp : candidates(s.z)) {
    const Ref zpi = inv(zp);
    Solutions sol;
    for (size_t i = 0; i < us.size() && sol.kind != Solutions::none; ++i) sol.add(exponents(ut[i], conj(vt[i], zpi), y));
    auto n = sol.pick();
    if (!n) continue;
    Ref w = mul(P, mul(pow(y, *n), zp), inv(Q));
    for (size_t i = 0; i < us.size(); ++i) verify(us[i], vs[i], w);
    return w;
  }
  return std::nullopt;
}

std::vector<Ref> Solver::finite_centralizer(const std::vector<Ref>& us) {
  if (g_.kind() == GroupKind::free) {
    audit_.push_back({"path", "finite-order-free"});
    std::vector<Ref> gens;
    const Alphabet& a = *g_.alphabet();
    for (Letter x = 0; x < a.size(); ++x)
      if (x <= a.inverse(x)) gens.push_back(st_.letter(x));
    return gens;
  }
  auto* f = dynamic_cast<const FiniteGroup*>(&g_);
  if (!f) fail(Errc::search_budget_exceeded, "finite-order centralizer needs a finite or free backend");
  audit_.push_back({"path", "finite-order-table"});
  const FiniteGroupTable& t = f->table();
  std::vector<uint32_t> ue;
  for (Ref u : us) ue.push_back(f->element(st_.expand(u)));
  std::vector<bool> in(t.order, false);
  in[0] = true;
  std::vector<uint32_t> members{0};
  std::vector<Ref> gens;
  for (const Word& x : g_.ball(g_.delta())) {
    const uint32_t e = f->element(x);
    bool commutes = true;
    for (uint32_t a : ue) commutes = commutes && t.mul(a, e) == t.mul(e, a);
    if (!commutes || in[e]) continue;
    gens.push_back(word(x));
    // Close the subgroup under right multiplication by all generators.
    std::vector<uint32_t> gen_el;
    for (Ref gr : gens) gen_el.push_back(f->element(st_.expand(gr)));
    for (size_t k = 0; k < members.size(); ++k)
      for (uint32_t ge : gen_el) {
        uint32_t p = t.mul(members[k], ge);
        if (!in[p]) {
          in[p] = true;
          members.push_back(p);
        }
      }
  }
  return gens;
}

std::vector<Ref> Solver::centralizer(const std::vector<Ref>& us) {
  size_t pick = us.size();
  for (size_t i = 0; i < us.size() && pick == us.size(); ++i)
    if (infinite(us[i])) pick = i;
  std::vector<Ref> gens;
  if (pick == us.size()) {
    gens = finite_centralizer(us);
  } else {
    audit_.push_back({"path", "infinite-order"});
    Rotated pu = rotate(us[pick]);
    Straight s = straight(pu.c);
    const Ref P = mul(pu.x, s.g);
    std::vector<Ref> ut;
    for (Ref u : us) ut.push_back(conj(u, P));
    auto [y, ell] = root(s.z);
    (void)ell;
    std::vector<Ref> local;
    for (Ref zp : candidates(s.z)) {
      const Ref zpi = inv(zp);
      Solutions sol;
      for (size_t i = 0; i < ut.size() && sol.kind != Solutions::none; ++i) sol.add(exponents(ut[i], conj(ut[i], zpi), y));
      auto n = sol.pick();
      if (!n) continue;
      local.push_back(mul(pow(y, *n), zp));
      if (zp == kEmpty && sol.kind == Solutions::periodic) local.push_back(pow(y, sol.T));
    }
    const Ref Pi = inv(P);
    for (Ref h : local) gens.push_back(conj(h, Pi));
  }
  std::vector<Ref> out;
  for (Ref h : gens) {
    if (h == kEmpty || std::find(out.begin(), out.end(), h) != out.end()) continue;
    for (Ref u : us)
      if (conj(u, h) != u) fail(Errc::assertion_failure, "centralizer element does not commute");
    out.push_back(h);
  }
  return out;
}

}  // namespace

bool is_shortlex_straight(const Program& p, const GroupOracle& g) {
  Store st(*g.alphabet());
  Shortlex sl(st, g);
  return all_powers_accepted(sl.shortlex_runner(), eval_to_store(sl, p));
}

Program central_rotate(const Program& p) {
  const uint64_t n = length(p), h = n / 2;
  return concat(extract(p, h, n), extract(p, 0, h));
}

StraightWitness straighten(const Program& u, const GroupOracle& g) {
  ConjugacyConfig cfg;
  Solver s(g, cfg);
  Ref ur = s.load(u);
  auto st = s.straight(ur);
  auto [y, ell] = s.root(st.z);
  StraightWitness w;
  w.g = st.gw;
  w.m = st.m;
  w.z = s.out(st.z);
  w.y = s.out(y);
  w.ell = ell;
  for (Ref c : s.candidates(st.z)) w.cz.push_back(s.out(c));
  return w;
}

ConjugacyResult conjugacy(const Program& u, const Program& v, const GroupOracle& g, const ConjugacyConfig& cfg) {
  Solver s(g, cfg);
  ConjugacyResult res;
  auto w = s.conjugate(s.load(u), s.load(v));
  if (w) res.witness = s.out(*w);
  res.audit = s.audit();
  return res;
}

std::optional<Word> conjugate_words(const Word& u, const Word& v, const GroupOracle& g) {
  const Alphabet& a = *g.alphabet();
  const Word us = g.slex_short(u), vs = g.slex_short(v);
  auto rotate = [&](const Word& w, Word& left) {
    const size_t h = w.size() / 2;
    left.assign(w.begin(), w.begin() + h);
    Word c(w.begin() + h, w.end());
    c.insert(c.end(), left.begin(), left.end());
    return g.slex_short(c);
  };
  Word ul, vl;
  const Word uc = rotate(us, ul), vc = rotate(vs, vl);
  const uint64_t K = g.constants().K;
  if (uc.size() > K || vc.size() > K) {
    auto r = conjugacy(word_program(g.alphabet(), u), word_program(g.alphabet(), v), g);
    if (!r.witness) return std::nullopt;
    return eval(*r.witness);
  }
  auto e = g.explicit_conjugacy(uc, vc);
  if (!e) return std::nullopt;
  Word w = ul;
  w.insert(w.end(), e->begin(), e->end());
  Word vli = a.invert(vl);
  w.insert(w.end(), vli.begin(), vli.end());
  w = g.slex_short(w);
  Word check = a.invert(w);
  check.insert(check.end(), us.begin(), us.end());
  check.insert(check.end(), w.begin(), w.end());
  if (g.slex_short(check) != vs) fail(Errc::assertion_failure, "conjugator failed verification");
  return w;
}

ConjugacyResult simultaneous_conjugacy(const std::vector<Program>& us, const std::vector<Program>& vs,
                                       const GroupOracle& g, const ConjugacyConfig& cfg) {
  Solver s(g, cfg);
  std::vector<Ref> ur, vr;
  for (const Program& p : us) ur.push_back(s.load(p));
  for (const Program& p : vs) vr.push_back(s.load(p));
  ConjugacyResult res;
  auto w = s.simultaneous(ur, vr);
  if (w) res.witness = s.out(*w);
  res.audit = s.audit();
  return res;
}

CentralizerResult centralizer(const std::vector<Program>& us, const GroupOracle& g, const ConjugacyConfig& cfg) {
  Solver s(g, cfg);
  std::vector<Ref> ur;
  for (const Program& p : us) ur.push_back(s.load(p));
  CentralizerResult res;
  for (Ref h : s.centralizer(ur)) res.generators.push_back(s.out(h));
  res.audit = s.audit();
  return res;
}

Trichotomy exponent_solutions(const Program& u, const Program& v, const Program& y, const GroupOracle& g,
                              const ConjugacyConfig& cfg) {
  Solver s(g, cfg);
  return s.exponents(s.load(u), s.load(v), s.load(y));
}

}  // namespace hypslp
