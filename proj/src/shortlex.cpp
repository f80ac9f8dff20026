#include "hypslp/shortlex.hpp"

#include <algorithm>
#include <atomic>
#include <string>

#include "hypslp/errors.hpp"
#include "hypslp/slp.hpp"

namespace hypslp {

namespace {

std::atomic<uint64_t> g_length_checks{0}, g_length_failures{0}, g_searches{0}, g_search_failures{0},
    g_output_checks{0}, g_output_failures{0};

Word cat(std::initializer_list<const Word*> parts) {
  Word out;
  for (const Word* p : parts) out.insert(out.end(), p->begin(), p->end());
  return out;
}

}  // namespace

AuditCounts audit_counts() {
  AuditCounts a;
  a.length_checks = g_length_checks;
  a.length_failures = g_length_failures;
  a.searches = g_searches;
  a.search_failures = g_search_failures;
  a.output_checks = g_output_checks;
  a.output_failures = g_output_failures;
  return a;
}

void reset_audit() {
  g_length_checks = g_length_failures = g_searches = g_search_failures = 0;
  g_output_checks = g_output_failures = 0;
}

Shortlex::Shortlex(Store& st, const GroupOracle& g)
    : st_(st),
      g_(g),
      slx_dfa_(g.shortlex_acceptor()),
      geo_(st, g.geodesic_acceptor()),
      slx_(st, g.shortlex_acceptor()),
      ball_(g.ball(g.zeta())),
      dball_(g.ball(g.delta())),
      zeta_(g.zeta()) {
  if (st.sigma() != g.alphabet()->size()) fail(Errc::alphabet_mismatch, "store alphabet differs from group alphabet");
  // Depth 1 is the outermost tether, its body and everything below sit at depth 2.
  T_ = 16 * zeta_ * 2 + 2 * zeta_;
  Lr_ = 8 * zeta_ * 2;
  for (uint32_t i = 0; i < ball_.size(); ++i) {
    ball_idx_.emplace(ball_[i], i);
    ball_inv_.push_back(g.alphabet()->invert(ball_[i]));
  }
  // Non-accepting states of a shortlex acceptor are dead, but compute
  // co-reachability anyway so that other acceptors behave.
  const Dfa& d = slx_dfa_;
  live_.assign(d.states, 0);
  for (State q = 0; q < d.states; ++q) live_[q] = d.accepting[q];
  for (bool changed = true; changed;) {
    changed = false;
    for (State q = 0; q < d.states; ++q) {
      if (live_[q]) continue;
      for (int a = 0; a < d.sigma; ++a)
        if (live_[d.step(q, static_cast<Letter>(a))]) {
          live_[q] = 1;
          changed = true;
          break;
        }
    }
  }
}

uint32_t Shortlex::ball_index(const Word& w) {
  auto it = ball_idx_.find(w);
  if (it == ball_idx_.end()) fail(Errc::assertion_failure, "word outside B(zeta): " + g_.alphabet()->format(w));
  return it->second;
}

void Shortlex::search_failed(const char* what) {
  ++g_search_failures;
  fail(Errc::assertion_failure, std::string("no candidate passed the shortlex check in ") + what);
}

void Shortlex::check_lengths(const Entry& e, uint32_t height) {
  ++g_length_checks;
  const uint64_t hi = Lr_ + 2 * zeta_ * height;
  auto ok = [&](const Word& w) { return w.size() >= Lr_ && w.size() <= hi; };
  if (!ok(e.l) || !ok(e.r)) {
    ++g_length_failures;
    fail(Errc::assertion_failure, "decoration words violate the length constraint");
  }
}

uint32_t Shortlex::entry(Ref x) {
  if (auto it = entry_of_.find(x); it != entry_of_.end()) return it->second;
  Entry e;
  const uint64_t len = st_.length(x);
  if (len <= T_) {
    e.w = st_.expand(x);
  } else {
    const uint32_t height = st_.node(x).height;
    auto [bx, cx] = st_.split(x);
    const uint32_t eb = entry(bx), ec = entry(cx);
    const Entry& B = entries_[eb];
    const Entry& C = entries_[ec];
    e.is_short = false;
    if (B.is_short && C.is_short) {
      Word w = cat({&B.w, &C.w});
      e.l.assign(w.begin(), w.begin() + Lr_);
      e.r.assign(w.end() - Lr_, w.end());
      e.mid.assign(w.begin() + Lr_, w.end() - Lr_);
      e.mode = Mode::explicit_mid;
    } else if (!B.is_short && !C.is_short) {
      e.l = B.l;
      e.r = C.r;
      e.mid = cat({&B.r, &C.l});
      e.mode = Mode::both_long;
    } else if (!B.is_short) {
      e.l = B.l;
      if (C.w.size() <= 2 * zeta_) {
        e.r = cat({&B.r, &C.w});
        e.mode = Mode::alias_left;
      } else {
        Word rv = cat({&B.r, &C.w});
        e.r.assign(rv.end() - Lr_, rv.end());
        e.mid.assign(rv.begin(), rv.end() - Lr_);
        e.mode = Mode::right_ext;
      }
    } else {
      e.r = C.r;
      if (B.w.size() <= 2 * zeta_) {
        e.l = cat({&B.w, &C.l});
        e.mode = Mode::alias_right;
      } else {
        Word lu = cat({&B.w, &C.l});
        e.l.assign(lu.begin(), lu.begin() + Lr_);
        e.mid.assign(lu.begin() + Lr_, lu.end());
        e.mode = Mode::left_ext;
      }
    }
    e.eb = eb;
    e.ec = ec;
    check_lengths(e, height);
  }
  entries_.push_back(std::move(e));
  const uint32_t id = static_cast<uint32_t>(entries_.size() - 1);
  entry_of_.emplace(x, id);
  return id;
}

Ref Shortlex::deco(uint32_t e, uint32_t a, uint32_t b) {
  Entry& E = entries_[e];
  const uint32_t key = a * static_cast<uint32_t>(ball_.size()) + b;
  if (auto it = E.deco.find(key); it != E.deco.end()) return it->second;
  const Dfa& d = slx_dfa_;
  Ref res = kEmpty;
  bool ok = false;
  switch (E.mode) {
    case Mode::explicit_mid:
      res = word_ref(g_.slex_short(cat({&ball_[a], &E.mid, &ball_inv_[b]})));
      ok = true;
      break;
    case Mode::alias_left:
      res = deco(E.eb, a, b);
      ok = true;
      break;
    case Mode::alias_right:
      res = deco(E.ec, a, b);
      ok = true;
      break;
    case Mode::both_long:
      ++g_searches;
      for (uint32_t c = 0; c < ball_.size() && !ok; ++c) {
        Ref bp = deco(E.eb, a, c);
        State q = slx_.run(bp, d.initial);
        if (!live(q)) continue;
        for (uint32_t dd = 0; dd < ball_.size(); ++dd) {
          Word z = g_.slex_short(cat({&ball_[c], &E.mid, &ball_inv_[dd]}));
          State q2 = d.run(q, z);
          if (!live(q2)) continue;
          Ref cp = deco(E.ec, dd, b);
          if (d.accepting[slx_.run(cp, q2)]) {
            res = st_.concat({bp, word_ref(z), cp});
            ok = true;
            break;
          }
        }
      }
      break;
    case Mode::right_ext:
      ++g_searches;
      for (uint32_t c = 0; c < ball_.size(); ++c) {
        Ref bp = deco(E.eb, a, c);
        State q = slx_.run(bp, d.initial);
        if (!live(q)) continue;
        Word z = g_.slex_short(cat({&ball_[c], &E.mid, &ball_inv_[b]}));
        if (d.accepting[d.run(q, z)]) {
          res = st_.concat(bp, word_ref(z));
          ok = true;
          break;
        }
      }
      break;
    case Mode::left_ext:
      ++g_searches;
      for (uint32_t c = 0; c < ball_.size(); ++c) {
        Word z = g_.slex_short(cat({&ball_[a], &E.mid, &ball_inv_[c]}));
        State q = d.run(d.initial, z);
        if (!live(q)) continue;
        Ref cp = deco(E.ec, c, b);
        if (d.accepting[slx_.run(cp, q)]) {
          res = st_.concat(word_ref(z), cp);
          ok = true;
          break;
        }
      }
      break;
  }
  if (!ok) search_failed("decoration");
  entries_[e].deco.emplace(key, res);
  return res;
}

Ref Shortlex::tether(Ref x, const Word& a0, const Word& b0) {
  if (!geo_.accepts(x)) fail(Errc::not_geodesic, "tether body is not geodesic");
  Word a = g_.slex_short(a0), b = g_.slex_short(b0);
  if (a.size() > zeta_ || b.size() > zeta_) {
    // Long tether words: reduce the pieces separately.
    Ref left = combine(word_ref(a), tether(x, {}, {}));
    return combine(left, word_ref(g_.slex_short(g_.alphabet()->invert(b))));
  }
  const Word binv = g_.alphabet()->invert(b);
  Ref res = kEmpty;
  if (st_.length(x) <= T_) {
    Word w = st_.expand(x);
    res = word_ref(g_.slex_short(cat({&a, &w, &binv})));
  } else {
    const uint32_t e = entry(x);
    const Dfa& d = slx_dfa_;
    bool ok = false;
    ++g_searches;
    for (uint32_t c = 0; c < ball_.size() && !ok; ++c) {
      Word s = g_.slex_short(cat({&a, &entries_[e].l, &ball_inv_[c]}));
      State q = d.run(d.initial, s);
      if (!live(q)) continue;
      for (uint32_t dd = 0; dd < ball_.size(); ++dd) {
        Ref bp = deco(e, c, dd);
        State q2 = slx_.run(bp, q);
        if (!live(q2)) continue;
        Word t = g_.slex_short(cat({&ball_[dd], &entries_[e].r, &binv}));
        if (d.accepting[d.run(q2, t)]) {
          res = st_.concat({word_ref(s), bp, word_ref(t)});
          ok = true;
          break;
        }
      }
    }
    if (!ok) search_failed("tether");
  }
  ++g_output_checks;
  bool good = slx_.accepts(res) && (!a.empty() || !b.empty() || st_.length(res) == st_.length(x));
  if (!good) {
    ++g_output_failures;
    fail(Errc::assertion_failure, "tether output is not shortlex");
  }
  return res;
}

std::optional<Word> Shortlex::within_delta(Ref g, Ref h) {
  const uint64_t m = st_.length(g), n = st_.length(h);
  if ((m > n ? m - n : n - m) > g_.delta()) return std::nullopt;
  Ref th = tether(h, {}, {});
  for (const Word& b : dball_) {
    if (st_.length(th) + b.size() < m) continue;
    if (tether(g, {}, b) == th) return b;
  }
  return std::nullopt;
}

Ref Shortlex::combine(Ref u, Ref v) {
  if (u == kEmpty) return v;
  if (v == kEmpty) return u;
  const uint64_t m = st_.length(u), n = st_.length(v);
  if (m + n <= kExplicit) {
    Word w = st_.expand(u), y = st_.expand(v);
    return word_ref(g_.slex_short(cat({&w, &y})));
  }
  const Dfa& d = slx_dfa_;
  if (d.accepting[slx_.run(v, slx_.run(u, d.initial))]) return st_.concat(u, v);

  const Alphabet& alpha = *g_.alphabet();
  const Ref ui = st_.inverse(u);
  auto dist = [&](uint64_t t) { return within_delta(st_.prefix(v, t), st_.prefix(ui, t)); };
  const uint64_t mu = std::min(m, n);
  if (auto a = dist(mu)) {
    if (m <= n) return tether(st_.suffix(v, m), *a, {});
    return tether(st_.prefix(u, m - n), {}, alpha.invert(*a));
  }
  // dist holds at p and fails at q; gallop from the junction, then bisect.
  uint64_t p = 0, q = mu;
  Word ap;
  for (uint64_t t = 1; t < q; t *= 2) {
    auto a = dist(t);
    if (!a) {
      q = t;
      break;
    }
    p = t;
    ap = *a;
  }
  while (q - p > 1) {
    const uint64_t r = p + (q - p + 1) / 2;
    if (auto a = dist(r)) {
      p = r;
      ap = *a;
    } else {
      q = r;
    }
  }
  const uint64_t k = p, j = k + 1;
  const Word mid0{st_.letter_at(u, m - j)}, mid1{st_.letter_at(v, k)};
  const Ref ul = st_.prefix(u, m - j), vr = st_.suffix(v, j);
  std::vector<std::optional<Ref>> right(dball_.size());
  ++g_searches;
  for (const Word& b : dball_) {
    Ref left = tether(ul, {}, b);
    State q0 = slx_.run(left, d.initial);
    if (!live(q0)) continue;
    const Word binv = alpha.invert(b);
    for (size_t ci = 0; ci < dball_.size(); ++ci) {
      const Word& c = dball_[ci];
      const Word cinv = alpha.invert(c);
      Word s = g_.slex_short(cat({&binv, &mid0, &ap, &mid1, &cinv}));
      State q1 = d.run(q0, s);
      if (!live(q1)) continue;
      if (!right[ci]) right[ci] = tether(vr, c, {});
      if (d.accepting[slx_.run(*right[ci], q1)]) return st_.concat({left, word_ref(s), *right[ci]});
    }
  }
  search_failed("combine");
  return kEmpty;
}

Ref Shortlex::reduce(Ref x) {
  if (auto it = reduced_.find(x); it != reduced_.end()) return it->second;
  Ref res;
  const Store::Node& n = st_.node(x);
  if (n.len <= kExplicit) {
    res = word_ref(g_.slex_short(st_.expand(x)));
  } else if (n.kind == Store::Kind::pair) {
    const Ref a = n.a, b = n.b;
    Ref ra = reduce(a);
    res = combine(ra, reduce(b));
  } else {
    const uint64_t k = n.k;
    Ref cur = reduce(n.a), acc = kEmpty;
    for (uint64_t e = k;; e >>= 1) {
      if (e & 1) acc = combine(acc, cur);
      if (e <= 1) break;
      cur = combine(cur, cur);
    }
    res = acc;
  }
  reduced_.emplace(x, res);
  return res;
}

std::optional<uint64_t> Shortlex::order(Ref x) {
  const Ref r = reduce(x);
  if (r == kEmpty) return 1;
  Ref acc = r;
  for (uint64_t k = 2; k <= g_.torsion_bound(); ++k) {
    acc = combine(acc, r);
    if (acc == kEmpty) return k;
  }
  return std::nullopt;
}

Ref eval_to_store(Shortlex& sl, const Program& p) {
  Store& st = sl.store();
  if (!(*p.alphabet() == *sl.group().alphabet())) fail(Errc::alphabet_mismatch, "program and group alphabets differ");
  std::vector<Ref> val(p.size(), kEmpty);
  auto sym = [&](const Sym& s) { return s.var ? val[s.id] : st.letter(static_cast<Letter>(s.id)); };
  for (uint32_t v = 0; v < p.size(); ++v) {
    const Rhs& r = p.rhs(v);
    if (auto* t = std::get_if<TerminalRule>(&r)) {
      val[v] = st.word(t->w);
    } else if (auto* c = std::get_if<ConcatRule>(&r)) {
      std::vector<Ref> parts;
      for (const Sym& s : c->items) parts.push_back(sym(s));
      while (parts.size() > 1) {
        std::vector<Ref> next;
        for (size_t k = 0; k + 1 < parts.size(); k += 2) next.push_back(st.concat(parts[k], parts[k + 1]));
        if (parts.size() % 2) next.push_back(parts.back());
        parts.swap(next);
      }
      val[v] = parts.empty() ? kEmpty : parts[0];
    } else if (auto* c = std::get_if<CutRule>(&r)) {
      Ref x = sym(c->x);
      const uint64_t n = st.length(x), j = c->j.value_or(n);
      if (c->i > j || j > n) fail(Errc::index_out_of_range, "cut outside the word of " + p.name(v));
      val[v] = st.extract(x, c->i, j);
    } else {
      const auto& t = std::get<TetherRule>(r);
      val[v] = sl.tether(sym(t.x), t.a, t.b);
    }
  }
  return val[p.start()];
}

namespace {

Program compile(const Program& p, const GroupOracle& g) {
  Store st(*g.alphabet());
  Shortlex sl(st, g);
  Ref r = eval_to_store(sl, p);
  return from_store(st, sl.tether(r, {}, {}), g.alphabet());
}

}  // namespace

Program tethered_to_slp(const Program& p, const GroupOracle& g) {
  if (p.has_cuts()) fail(Errc::kind_unsupported, "program has cuts; use tethercut_to_slp");
  return compile(p, g);
}

Program tethercut_to_slp(const Program& p, const GroupOracle& g) { return compile(p, g); }

std::vector<uint64_t> lengths_of_tethered(const Program& p, const GroupOracle& g) {
  Store st(*g.alphabet());
  Shortlex sl(st, g);
  std::vector<uint64_t> out(p.size());
  // Evaluate each variable as its own start through a one-variable prefix
  // of the program; variables are topologically sorted so val is shared.
  ProgramBuilder b(p.alphabet());
  for (uint32_t v = 0; v < p.size(); ++v) b.add(p.rhs(v), p.name(v));
  for (uint32_t v = 0; v < p.size(); ++v) out[v] = st.length(eval_to_store(sl, b.finish(v)));
  return out;
}

std::optional<Word> within_delta(const Program& p, const Program& q, const GroupOracle& g) {
  Store st(*g.alphabet());
  Shortlex sl(st, g);
  Ref a = eval_to_store(sl, p), b = eval_to_store(sl, q);
  if (!sl.geodesic(a) || !sl.geodesic(b)) fail(Errc::not_geodesic, "within_delta needs geodesic words");
  return sl.within_delta(a, b);
}

Ref reduce_program(Shortlex& sl, const Program& p) {
  if (p.has_cuts() || p.has_tethers()) return sl.reduce(eval_to_store(sl, p));
  if (!(*p.alphabet() == *sl.group().alphabet())) fail(Errc::alphabet_mismatch, "program and group alphabets differ");
  Store& st = sl.store();
  std::vector<Ref> val(p.size(), kEmpty);
  for (uint32_t v = 0; v < p.size(); ++v) {
    const Rhs& r = p.rhs(v);
    if (auto* t = std::get_if<TerminalRule>(&r)) {
      val[v] = sl.reduce(st.word(t->w));
    } else if (auto* c = std::get_if<ConcatRule>(&r)) {
      std::vector<Ref> parts;
      for (const Sym& x : c->items) parts.push_back(x.var ? val[x.id] : sl.reduce(st.letter(static_cast<Letter>(x.id))));
      while (parts.size() > 1) {
        std::vector<Ref> next;
        for (size_t k = 0; k + 1 < parts.size(); k += 2) next.push_back(sl.combine(parts[k], parts[k + 1]));
        if (parts.size() % 2) next.push_back(parts.back());
        parts.swap(next);
      }
      val[v] = parts.empty() ? kEmpty : parts[0];
    }
  }
  return val[p.start()];
}

Program slp_to_shortlex(const Program& p, const GroupOracle& g) {
  Store st(*g.alphabet());
  Shortlex sl(st, g);
  return from_store(st, reduce_program(sl, p), g.alphabet());
}

bool is_identity(const Program& p, const GroupOracle& g) {
  Store st(*g.alphabet());
  Shortlex sl(st, g);
  return reduce_program(sl, p) == kEmpty;
}

std::optional<uint64_t> order(const Program& p, const GroupOracle& g) {
  Store st(*g.alphabet());
  Shortlex sl(st, g);
  return sl.order(reduce_program(sl, p));
}

}  // namespace hypslp
