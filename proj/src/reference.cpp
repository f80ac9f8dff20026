#include "hypslp/reference.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "hypslp/errors.hpp"

namespace hypslp {

namespace {

Word free_reduce(const Alphabet& alpha, const Word& w) {
  Word out;
  for (Letter x : w) {
    if (!out.empty() && out.back() == alpha.inverse(x))
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

struct TableReps {
  std::vector<Word> rep;          // by element, shortlex least word
  std::vector<uint32_t> order;    // elements in BFS order
};

TableReps bfs_reps(const FiniteGroup& g) {
  const FiniteGroupTable& t = g.table();
  TableReps r;
  r.rep.assign(t.order, Word{});
  std::vector<bool> seen(t.order, false);
  std::deque<uint32_t> q{0};
  seen[0] = true;
  while (!q.empty()) {
    uint32_t x = q.front();
    q.pop_front();
    r.order.push_back(x);
    for (Letter a = 0; a < t.letter_of.size(); ++a) {
      uint32_t y = t.mul(x, t.letter_of[a]);
      if (seen[y]) continue;
      seen[y] = true;
      r.rep[y] = r.rep[x];
      r.rep[y].push_back(a);
      q.push_back(y);
    }
  }
  return r;
}

uint32_t table_element(const FiniteGroup& g, const Word& w) {
  const FiniteGroupTable& t = g.table();
  uint32_t x = 0;
  for (Letter a : w) x = t.mul(x, t.letter_of[a]);
  return x;
}

void cap_check(const Word& w, uint64_t cap) {
  if (w.size() > cap) fail(Errc::cap_exceeded, "word longer than the reference cap");
}

// w = p c p^-1 with c cyclically reduced, for freely reduced w.
void split_cyclic(const Alphabet& alpha, const Word& w, Word& p, Word& c) {
  size_t i = 0, n = w.size();
  while (2 * i + 1 < n && w[i] == alpha.inverse(w[n - 1 - i])) ++i;
  p.assign(w.begin(), w.begin() + i);
  c.assign(w.begin() + i, w.end() - i);
}

}  // namespace

Word naive_slex(const Word& w, const GroupOracle& g, uint64_t cap) {
  cap_check(w, cap);
  if (g.kind() == GroupKind::free) return free_reduce(*g.alphabet(), w);
  if (auto* f = dynamic_cast<const FiniteGroup*>(&g)) return bfs_reps(*f).rep[table_element(*f, w)];
  return g.slex_short(w);
}

std::optional<Word> naive_conjugate(const Word& u, const Word& v, const GroupOracle& g, uint32_t radius) {
  cap_check(u, kNaiveWordCap);
  cap_check(v, kNaiveWordCap);
  const Alphabet& alpha = *g.alphabet();
  if (g.kind() == GroupKind::free) {
    Word p, c, q, d;
    split_cyclic(alpha, free_reduce(alpha, u), p, c);
    split_cyclic(alpha, free_reduce(alpha, v), q, d);
    if (c.size() != d.size()) return std::nullopt;
    for (size_t i = 0; i <= c.size(); ++i) {
      if (c.size() && i == c.size()) break;
      if (!std::equal(d.begin(), d.end() - i, c.begin() + i) || !std::equal(d.end() - i, d.end(), c.begin()))
        continue;
      // v = q c1^-1 c c1 q^-1 with c1 = c[:i].
      Word x = p;
      x.insert(x.end(), c.begin(), c.begin() + i);
      Word qi = alpha.invert(q);
      x.insert(x.end(), qi.begin(), qi.end());
      return free_reduce(alpha, x);
    }
    return std::nullopt;
  }
  if (auto* f = dynamic_cast<const FiniteGroup*>(&g)) {
    TableReps r = bfs_reps(*f);
    const FiniteGroupTable& t = f->table();
    const uint32_t eu = table_element(*f, u), ev = table_element(*f, v);
    // Shortlex order of representatives is BFS order.
    for (uint32_t x : r.order) {
      uint32_t xi = table_element(*f, alpha.invert(r.rep[x]));
      if (t.mul(t.mul(xi, eu), x) == ev) return r.rep[x];
    }
    return std::nullopt;
  }
  const Word target = g.slex_short(v);
  uint64_t steps = 0;
  for (const Word& x : g.ball(radius)) {
    if (++steps > kNaiveStepCap) fail(Errc::cap_exceeded, "conjugator scan over the step cap");
    Word w = alpha.invert(x);
    w.insert(w.end(), u.begin(), u.end());
    w.insert(w.end(), x.begin(), x.end());
    if (g.slex_short(w) == target) return x;
  }
  return std::nullopt;
}

Word Corpus::word(const AlphabetPtr& alpha, size_t len) {
  Word w(len);
  for (auto& x : w) x = static_cast<Letter>(uniform(0, alpha->size() - 1));
  return w;
}

Word Corpus::reduced_word(const AlphabetPtr& alpha, size_t len) {
  Word w;
  while (w.size() < len) {
    Letter x = static_cast<Letter>(uniform(0, alpha->size() - 1));
    if (!w.empty() && alpha->inverse(x) == w.back()) continue;
    w.push_back(x);
  }
  return w;
}

Program Corpus::program(const AlphabetPtr& alpha) {
  struct Var {
    uint32_t id, inv;
    uint64_t len;
  };
  ProgramBuilder b(alpha);
  std::vector<Var> pool;
  for (uint32_t t = 0; t < params_.terminals; ++t) {
    Word w = word(alpha, uniform(1, params_.terminal_len));
    uint32_t x = b.terminal(w), xi = b.terminal(alpha->invert(w));
    pool.push_back({x, xi, w.size()});
    pool.push_back({xi, x, w.size()});
  }
  uint32_t start = pool.back().id;
  std::uniform_real_distribution<double> coin(0, 1);
  for (uint32_t k = 0; k < params_.variables; ++k) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      // Lean towards recent rules so that lengths grow.
      auto pick = [&] {
        if (coin(rng_) < 0.6) return pool[pool.size() - 1 - uniform(0, std::min<size_t>(3, pool.size() - 1))];
        return pool[uniform(0, pool.size() - 1)];
      };
      const Var a = pick(), c = pick();
      std::vector<uint32_t> items, inv_items;
      if (coin(rng_) < params_.inverse_bias) {
        // a c a^-1, or a a^-1 c when the coin says so
        if (coin(rng_) < 0.5)
          items = {a.id, c.id, a.inv};
        else
          items = {a.id, a.inv, c.id};
      } else {
        items = {a.id, c.id};
      }
      uint64_t len = 0;
      for (uint32_t v : items) {
        for (const Var& p : pool)
          if (p.id == v) {
            len += p.len;
            break;
          }
      }
      if (len > params_.max_len) continue;
      for (auto it = items.rbegin(); it != items.rend(); ++it) {
        for (const Var& p : pool)
          if (p.id == *it) {
            inv_items.push_back(p.inv);
            break;
          }
      }
      std::vector<Sym> s, si;
      for (uint32_t v : items) s.push_back(Sym::variable(v));
      for (uint32_t v : inv_items) si.push_back(Sym::variable(v));
      uint32_t x = b.concat(s), xi = b.concat(si);
      pool.push_back({x, xi, len});
      pool.push_back({xi, x, len});
      start = x;
      break;
    }
  }
  return b.finish(start);
}

std::optional<std::vector<uint64_t>> naive_knapsack(const Word& target, const std::vector<Word>& bases,
                                                    uint64_t bound, const GroupOracle& g) {
  const Word want = naive_slex(target, g, uint64_t{1} << 20);
  const size_t k = bases.size();
  std::vector<uint64_t> n(k, 0);
  uint64_t steps = 0;
  while (true) {
    if (++steps > kNaiveStepCap) fail(Errc::cap_exceeded, "naive knapsack over the step cap");
    Word w;
    for (size_t i = 0; i < k; ++i)
      for (uint64_t j = 0; j < n[i]; ++j) w.insert(w.end(), bases[i].begin(), bases[i].end());
    if (naive_slex(w, g, uint64_t{1} << 20) == want) return n;
    // odometer, last coordinate fastest
    size_t i = k;
    while (i > 0 && n[i - 1] == bound) n[--i] = 0;
    if (i == 0) return std::nullopt;
    ++n[i - 1];
  }
}

}  // namespace hypslp
