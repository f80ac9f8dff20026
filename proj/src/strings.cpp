#include "hypslp/strings.hpp"

#include <algorithm>
#include <vector>

#include "hypslp/errors.hpp"
#include "hypslp/slp.hpp"

namespace hypslp {

namespace {

void same_alphabet(const Program& p, const Program& q) {
  if (!(*p.alphabet() == *q.alphabet())) fail(Errc::alphabet_mismatch, "programs over different alphabets");
}

void dfa_alphabet(const Dfa& m, const Program& p) {
  if (static_cast<size_t>(m.sigma) != p.alphabet()->size())
    fail(Errc::alphabet_mismatch, "automaton alphabet differs from program alphabet");
}

Progression from_sorted(const std::vector<uint64_t>& pos) {
  if (pos.empty()) return {};
  if (pos.size() == 1) return {pos[0], 0, 1};
  uint64_t d = pos[1] - pos[0];
  for (size_t k = 2; k < pos.size(); ++k)
    if (pos[k] - pos[k - 1] != d) fail(Errc::assertion_failure, "crossing occurrences are not a progression");
  return {pos[0], d, pos.size()};
}

}  // namespace

FactorFinder::FactorFinder(Store& st, Ref pattern, uint64_t brute_limit)
    : st_(st), pattern_(st.canon(pattern)), brute_(std::max<uint64_t>(brute_limit, 4)) {}

bool FactorFinder::occurs_at(Ref x, Ref y, uint64_t s) {
  uint64_t m = st_.length(x);
  if (s + m > st_.length(y)) return false;
  return st_.extract(y, s, s + m) == st_.canon(x);
}

uint64_t FactorFinder::lce(Ref y, uint64_t i, uint64_t j) {
  const uint64_t n = st_.length(y);
  const uint64_t room = n - std::max(i, j);
  auto same = [&](uint64_t l, uint64_t len) { return st_.extract(y, i + l, i + l + len) == st_.extract(y, j + l, j + l + len); };
  uint64_t l = 0, step = 1;
  while (l + step <= room && same(l, step)) {
    l += step;
    step *= 2;
  }
  for (step /= 2; step > 0; step /= 2)
    if (l + step <= room && same(l, step)) l += step;
  return l;
}

uint64_t FactorFinder::lcs(Ref y, uint64_t i, uint64_t j) {
  const uint64_t room = std::min(i, j);
  auto same = [&](uint64_t l, uint64_t len) {
    return st_.extract(y, i - l - len, i - l) == st_.extract(y, j - l - len, j - l);
  };
  uint64_t l = 0, step = 1;
  while (l + step <= room && same(l, step)) {
    l += step;
    step *= 2;
  }
  for (step /= 2; step > 0; step /= 2)
    if (l + step <= room && same(l, step)) l += step;
  return l;
}

Progression FactorFinder::filter_right(const Progression& s, Ref x, uint64_t m1, Ref y) {
  (void)m1;
  std::vector<uint64_t> keep;
  if (s.count <= 2) {
    for (uint64_t k = 0; k < s.count; ++k)
      if (occurs_at(x, y, s.first + k * s.diff)) keep.push_back(s.first + k * s.diff);
    return from_sorted(keep);
  }
  const uint64_t m = st_.length(x), d = s.diff, f = s.first;
  const Ref cx = st_.canon(x);
  uint64_t e_t = f + d + lce(y, f + d, f);
  uint64_t e_x = std::min(m, d + lce(cx, d, 0));
  if (e_x == m) {
    if (e_t < f + m) return {};
    uint64_t cnt = std::min(s.count, (e_t - f - m) / d + 1);
    Progression out{f, d, cnt};
    if (!occurs_at(x, y, out.first) || !occurs_at(x, y, out.last()))
      fail(Errc::assertion_failure, "periodic extension check failed");
    return out.count == 1 ? Progression{f, 0, 1} : out;
  }
  if (e_t < e_x) return {};
  uint64_t c = e_t - e_x;
  if (c >= f && (c - f) % d == 0 && (c - f) / d < s.count && occurs_at(x, y, c)) return {c, 0, 1};
  return {};
}

Progression FactorFinder::filter_left(const Progression& s, Ref x, uint64_t m1, Ref y) {
  std::vector<uint64_t> keep;
  if (s.count <= 2) {
    for (uint64_t k = 0; k < s.count; ++k) {
      uint64_t t = s.first + k * s.diff;
      if (t >= m1 && occurs_at(x, y, t - m1)) keep.push_back(t - m1);
    }
    return from_sorted(keep);
  }
  const uint64_t m = st_.length(x), d = s.diff, f = s.first, m2 = m - m1;
  const Ref cx = st_.canon(x);
  uint64_t g = s.last() + m2;
  uint64_t b_t = g - d - lcs(y, g - d, g);
  uint64_t e_x = std::min(m, d + lcs(cx, m - d, m));
  if (e_x == m) {
    // Keep t with t - m1 >= b_t.
    uint64_t need = b_t + m1;
    uint64_t k0 = need <= f ? 0 : (need - f + d - 1) / d;
    if (k0 >= s.count) return {};
    Progression out{f + k0 * d - m1, d, s.count - k0};
    if (!occurs_at(x, y, out.first) || !occurs_at(x, y, out.last()))
      fail(Errc::assertion_failure, "periodic extension check failed");
    return out.count == 1 ? Progression{out.first, 0, 1} : out;
  }
  if (b_t + e_x < m) return {};
  uint64_t c = b_t + e_x - m, t = c + m1;
  if (t >= f && (t - f) % d == 0 && (t - f) / d < s.count && occurs_at(x, y, c)) return {c, 0, 1};
  return {};
}

Progression FactorFinder::crossing(Ref x, Ref y) {
  const uint64_t m = st_.length(x), n = st_.length(y);
  if (m < 2 || m > n || st_.node(y).kind == Store::Kind::letter) return {};
  uint64_t key = (uint64_t{x} << 32) | y;
  if (auto it = cross_memo_.find(key); it != cross_memo_.end()) return it->second;
  auto [y1, y2] = st_.split(y);
  (void)y2;
  const uint64_t c = st_.length(y1);
  const uint64_t lo = c + 1 > m ? c + 1 - m : 0, hi = std::min(c - 1, n - m);
  Progression res;
  if (lo > hi) {
    res = {};
  } else if (2 * m <= brute_) {
    Word win, pat = st_.expand(x);
    st_.expand_range(y, lo, hi + m, win);
    std::vector<uint64_t> pos;
    for (auto it = win.begin();; ++it) {
      it = std::search(it, win.end(), pat.begin(), pat.end());
      if (it == win.end()) break;
      pos.push_back(lo + static_cast<uint64_t>(it - win.begin()));
    }
    res = from_sorted(pos);
  } else {
    auto [x1, x2] = st_.split(x);
    const uint64_t m1 = st_.length(x1);
    Progression a = filter_right(crossing(x1, y), x, m1, y);
    Progression b;
    if (c >= m1 && occurs_at(x, y, c - m1)) b = {c - m1, 0, 1};
    Progression cc = filter_left(crossing(x2, y), x, m1, y);
    std::vector<uint64_t> small;
    uint64_t top = 0;
    bool any = false;
    for (const Progression* p : {&a, &b, &cc}) {
      if (!p->count) continue;
      any = true;
      small.push_back(p->first);
      if (p->count > 1) small.push_back(p->first + p->diff);
      top = std::max(top, p->last());
    }
    if (any) {
      std::sort(small.begin(), small.end());
      small.erase(std::unique(small.begin(), small.end()), small.end());
      if (small.size() == 1) {
        res = {small[0], 0, 1};
      } else {
        uint64_t d = small[1] - small[0];
        if ((top - small[0]) % d) fail(Errc::assertion_failure, "occurrence union is not a progression");
        res = {small[0], d, (top - small[0]) / d + 1};
      }
    }
  }
  cross_memo_.emplace(key, res);
  return res;
}

std::optional<uint64_t> FactorFinder::first_in(Ref y) {
  const uint64_t m = st_.length(pattern_), n = st_.length(y);
  if (m == 0) return 0;
  if (m > n) return std::nullopt;
  if (auto it = first_memo_.find(y); it != first_memo_.end()) return it->second;
  std::optional<uint64_t> res;
  if (n <= brute_) {
    Word text = st_.expand(y), pat = st_.expand(pattern_);
    auto it = std::search(text.begin(), text.end(), pat.begin(), pat.end());
    if (it != text.end()) res = static_cast<uint64_t>(it - text.begin());
  } else {
    auto [y1, y2] = st_.split(y);
    res = first_in(y1);
    if (!res) {
      Progression p = crossing(pattern_, y);
      if (p.count) res = p.first;
    }
    if (!res) {
      auto r2 = first_in(y2);
      if (r2) res = st_.length(y1) + *r2;
    }
  }
  first_memo_.emplace(y, res);
  return res;
}

std::optional<uint64_t> find_factor(Store& st, Ref pattern, Ref text, uint64_t brute_limit) {
  FactorFinder ff(st, pattern, brute_limit);
  return ff.first_in(text);
}

std::optional<uint64_t> rotation_offset(Store& st, Ref p, Ref q) {
  if (st.length(p) != st.length(q)) return std::nullopt;
  if (st.length(p) == 0) return 0;
  auto m = find_factor(st, p, st.concat(q, q));
  if (m && *m >= st.length(q)) m = 0;
  return m;
}

bool all_powers_accepted(DfaRunner& m, Ref p) {
  const Dfa& d = m.dfa();
  State q = d.initial;
  for (int n = 0; n <= d.states; ++n) {
    if (!d.accepting[q]) return false;
    q = m.run(p, q);
  }
  return true;
}

bool equals(const Program& p, const Program& q) {
  same_alphabet(p, q);
  Store st(*p.alphabet());
  return to_store(st, p) == to_store(st, q);
}

std::optional<uint64_t> find_factor(const Program& pattern, const Program& text) {
  same_alphabet(pattern, text);
  Store st(*pattern.alphabet());
  Ref pr = to_store(st, pattern), tr = to_store(st, text);
  return find_factor(st, pr, tr);
}

std::optional<std::pair<Program, Program>> is_rotation(const Program& p, const Program& q) {
  same_alphabet(p, q);
  Store st(*p.alphabet());
  Ref pr = to_store(st, p), qr = to_store(st, q);
  auto m = rotation_offset(st, pr, qr);
  if (!m) return std::nullopt;
  return std::make_pair(from_store(st, st.prefix(qr, *m), q.alphabet()), from_store(st, st.suffix(qr, *m), q.alphabet()));
}

bool dfa_accepts(const Dfa& m, const Program& p) {
  dfa_alphabet(m, p);
  Store st(*p.alphabet());
  Ref r = to_store(st, p);
  DfaRunner run(st, m);
  return run.accepts(r);
}

bool all_powers_accepted(const Dfa& m, const Program& p) {
  dfa_alphabet(m, p);
  Store st(*p.alphabet());
  Ref r = to_store(st, p);
  DfaRunner run(st, m);
  return all_powers_accepted(run, r);
}

}  // namespace hypslp
