#include "hypslp/store.hpp"

#include <algorithm>
#include <limits>

#include "hypslp/errors.hpp"

namespace hypslp {

namespace {

constexpr uint32_t kTopless = std::numeric_limits<uint32_t>::max();
constexpr uint32_t kMaxLevel = 60000;

uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

uint32_t ceil_log2(uint64_t k) {
  uint32_t r = 0;
  while ((uint64_t{1} << r) < k && r < 64) ++r;
  return r;
}

uint64_t checked_mul(uint64_t a, uint64_t b) {
  if (a != 0 && b > kMaxLength / a) fail(Errc::length_exceeded, "word length exceeds 2^63");
  return a * b;
}

}  // namespace

size_t Store::KeyHash::operator()(const std::pair<uint64_t, uint64_t>& k) const {
  return static_cast<size_t>(mix64(k.first ^ mix64(k.second)));
}

Store::Store(const Alphabet& alpha) : inv_(alpha.size()) {
  for (size_t i = 0; i < alpha.size(); ++i) inv_[i] = alpha.inverse(static_cast<Letter>(i));
  nodes_.push_back(Node{Kind::empty, 0, 0, 0, 0, 0, 0, 0});
  for (size_t i = 0; i < alpha.size(); ++i)
    nodes_.push_back(Node{Kind::letter, 0, 1, static_cast<Ref>(i), 0, 0, 1, mix64(i + 1)});
}

Ref Store::intern(Kind kind, uint16_t level, Ref a, Ref b, uint64_t k) {
  std::pair<uint64_t, uint64_t> key{static_cast<uint64_t>(kind) | (uint64_t{level} << 8) | (uint64_t{a} << 32),
                                    kind == Kind::pair ? b : k};
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  Node n{kind, level, 0, a, b, k, 0, 0};
  const Node& x = nodes_[a];
  if (kind == Kind::pair) {
    const Node& y = nodes_[b];
    n.height = 1 + std::max(x.height, y.height);
    if (x.len > kMaxLength - y.len) fail(Errc::length_exceeded, "word length exceeds 2^63");
    n.len = x.len + y.len;
    n.hash = mix64(mix64(x.hash) ^ (y.hash * 0x2545F4914F6CDD1DULL) ^ (uint64_t{level} << 40));
  } else {
    n.height = x.height + ceil_log2(k);
    n.len = checked_mul(x.len, k);
    n.hash = mix64(x.hash ^ mix64(k ^ (uint64_t{level} << 48) ^ 0x5bd1e995ULL));
  }
  if (nodes_.size() >= std::numeric_limits<Ref>::max() - 1)
    fail(Errc::cap_exceeded, "store exhausted its node capacity");
  Ref id = static_cast<Ref>(nodes_.size());
  nodes_.push_back(n);
  index_.emplace(key, id);
  return id;
}

bool Store::bit(Ref s, uint32_t level) const {
  return (mix64(nodes_[s].hash ^ (uint64_t{level} * 0xD6E8FEB86659FD93ULL)) >> 29) & 1;
}

void Store::pull_left(std::vector<Piece>& left, std::deque<Elem>& x, uint32_t lvl) {
  while (!left.empty()) {
    Piece p = left.back();
    left.pop_back();
    if (p.cnt > 1) {
      left.push_back({p.s, p.cnt - 1, p.top});
      p.cnt = 1;
    }
    const Node& n = nodes_[p.s];
    if (n.level > lvl) {
      if (n.kind == Kind::pair) {
        left.push_back({n.a, 1, n.level - 1u});
        left.push_back({n.b, 1, n.level - 1u});
      } else {
        left.push_back({n.a, n.k, n.level - 1u});
      }
      continue;
    }
    x.push_front({p.s, 1});
    break;
  }
  while (!left.empty() && left.back().top < lvl + 1) {
    x.push_front({left.back().s, left.back().cnt});
    left.pop_back();
  }
}

void Store::pull_right(std::vector<Piece>& right_rev, std::deque<Elem>& x, uint32_t lvl) {
  while (!right_rev.empty()) {
    Piece p = right_rev.back();
    right_rev.pop_back();
    if (p.cnt > 1) {
      right_rev.push_back({p.s, p.cnt - 1, p.top});
      p.cnt = 1;
    }
    const Node& n = nodes_[p.s];
    if (n.level > lvl) {
      if (n.kind == Kind::pair) {
        right_rev.push_back({n.b, 1, n.level - 1u});
        right_rev.push_back({n.a, 1, n.level - 1u});
      } else {
        right_rev.push_back({n.a, n.k, n.level - 1u});
      }
      continue;
    }
    x.push_back({p.s, 1});
    break;
  }
  while (!right_rev.empty() && right_rev.back().top < lvl + 1) {
    x.push_back({right_rev.back().s, right_rev.back().cnt});
    right_rev.pop_back();
  }
}

void Store::compress(std::deque<Elem>& x, uint32_t lvl) {
  std::deque<Elem> norm;
  for (const Elem& e : x) {
    if (!norm.empty() && norm.back().s == e.s)
      norm.back().cnt += e.cnt;
    else
      norm.push_back(e);
  }
  const uint16_t L = static_cast<uint16_t>(lvl);
  if (lvl % 2 == 1) {
    for (Elem& e : norm)
      if (e.cnt >= 2) e = {make_run(e.s, e.cnt, L), 1};
    x.swap(norm);
    return;
  }
  std::deque<Elem> out;
  bool consumed = false;
  for (size_t i = 0; i < norm.size(); ++i) {
    const Elem e = norm[i];
    uint64_t avail = e.cnt - (consumed ? 1 : 0);
    consumed = false;
    if (avail > 0 && i + 1 < norm.size() && !bit(e.s, lvl) && bit(norm[i + 1].s, lvl)) {
      if (avail > 1) out.push_back({e.s, avail - 1});
      out.push_back({make_pair(e.s, norm[i + 1].s, L), 1});
      consumed = true;
    } else if (avail > 0) {
      out.push_back({e.s, avail});
    }
  }
  x.swap(out);
}

Ref Store::build(std::vector<Piece>& left, std::vector<Piece>& right_rev, std::deque<Elem>& x) {
  for (uint32_t lvl = 0;; ++lvl) {
    if (lvl > kMaxLevel) fail(Errc::assertion_failure, "store parse did not converge");
    pull_left(left, x, lvl);
    pull_right(right_rev, x, lvl);
    if (left.empty() && right_rev.empty()) {
      if (x.empty()) return kEmpty;
      if (x.size() == 1 && x.front().cnt == 1) return x.front().s;
    }
    compress(x, lvl + 1);
  }
}

Ref Store::word(const Word& w) {
  std::deque<Elem> x;
  for (Letter a : w) {
    if (a >= inv_.size()) fail(Errc::alphabet_mismatch, "letter outside the store alphabet");
    Ref r = letter(a);
    if (!x.empty() && x.back().s == r)
      ++x.back().cnt;
    else
      x.push_back({r, 1});
  }
  std::vector<Piece> l, r;
  return build(l, r, x);
}

Ref Store::concat(Ref a, Ref b) {
  if (a == kEmpty) return b;
  if (b == kEmpty) return a;
  if (nodes_[a].len > kMaxLength - nodes_[b].len) fail(Errc::length_exceeded, "word length exceeds 2^63");
  std::vector<Piece> l{{a, 1, kTopless}}, r{{b, 1, kTopless}};
  std::deque<Elem> x;
  return build(l, r, x);
}

Ref Store::concat(std::initializer_list<Ref> parts) {
  Ref acc = kEmpty;
  for (Ref p : parts) acc = concat(acc, p);
  return acc;
}

void Store::prefix_pieces(Ref s, uint64_t i, std::vector<Piece>& out) const {
  Ref cur = s;
  uint32_t top = kTopless;
  while (i > 0) {
    const Node& n = nodes_[cur];
    if (i == n.len) {
      out.push_back({cur, 1, top});
      return;
    }
    top = n.level - 1u;
    if (n.kind == Kind::pair) {
      uint64_t la = nodes_[n.a].len;
      if (i <= la) {
        cur = n.a;
      } else {
        out.push_back({n.a, 1, top});
        i -= la;
        cur = n.b;
      }
    } else {
      uint64_t xl = nodes_[n.a].len;
      uint64_t q = i / xl, r = i % xl;
      if (q) out.push_back({n.a, q, top});
      if (r == 0) return;
      cur = n.a;
      i = r;
    }
  }
}

void Store::suffix_pieces(Ref s, uint64_t i, std::vector<Piece>& out_rev) const {
  Ref cur = s;
  uint32_t top = kTopless;
  while (true) {
    const Node& n = nodes_[cur];
    if (i == 0) {
      out_rev.push_back({cur, 1, top});
      return;
    }
    if (i >= n.len) return;
    top = n.level - 1u;
    if (n.kind == Kind::pair) {
      uint64_t la = nodes_[n.a].len;
      if (i >= la) {
        i -= la;
        cur = n.b;
      } else {
        out_rev.push_back({n.b, 1, top});
        cur = n.a;
      }
    } else {
      uint64_t xl = nodes_[n.a].len;
      uint64_t q = i / xl, r = i % xl;
      if (r == 0) {
        out_rev.push_back({n.a, n.k - q, top});
        return;
      }
      if (n.k - q - 1 > 0) out_rev.push_back({n.a, n.k - q - 1, top});
      cur = n.a;
      i = r;
    }
  }
}

Ref Store::prefix(Ref s, uint64_t i) {
  uint64_t n = nodes_[s].len;
  if (i > n) fail(Errc::index_out_of_range, "prefix length " + std::to_string(i) + " exceeds word length " + std::to_string(n));
  if (i == 0) return kEmpty;
  if (i == n) return canon(s);
  std::vector<Piece> l, r;
  prefix_pieces(s, i, l);
  std::deque<Elem> x;
  return build(l, r, x);
}

Ref Store::suffix(Ref s, uint64_t i) {
  uint64_t n = nodes_[s].len;
  if (i > n) fail(Errc::index_out_of_range, "suffix offset " + std::to_string(i) + " exceeds word length " + std::to_string(n));
  if (i == n) return kEmpty;
  if (i == 0) return canon(s);
  std::vector<Piece> l, r;
  suffix_pieces(s, i, r);
  std::deque<Elem> x;
  return build(l, r, x);
}

Ref Store::extract(Ref s, uint64_t i, uint64_t j) {
  if (i > j || j > nodes_[s].len)
    fail(Errc::index_out_of_range, "range [" + std::to_string(i) + "," + std::to_string(j) + ") outside word of length " +
                                       std::to_string(nodes_[s].len));
  return suffix(prefix(s, j), i);
}

Ref Store::power(Ref s, uint64_t n) {
  s = canon(s);
  if (n == 0 || s == kEmpty) return kEmpty;
  checked_mul(nodes_[s].len, n);
  Ref acc = kEmpty, base = s;
  while (true) {
    if (n & 1) acc = concat(acc, base);
    n >>= 1;
    if (!n) break;
    base = concat(base, base);
  }
  return acc;
}

Ref Store::canon(Ref s) {
  if (s <= sigma()) return s;
  auto it = canon_memo_.find(s);
  if (it != canon_memo_.end()) return it->second;
  std::vector<Piece> l{{s, 1, kTopless}}, r;
  std::deque<Elem> x;
  Ref c = build(l, r, x);
  canon_memo_.emplace(s, c);
  canon_memo_.emplace(c, c);
  return c;
}

Ref Store::inverse(Ref s) {
  if (s == kEmpty) return kEmpty;
  if (s <= sigma()) return letter(inv_[s - 1]);
  auto it = inverse_memo_.find(s);
  if (it != inverse_memo_.end()) return it->second;
  const Node n = nodes_[s];
  Ref r;
  if (n.kind == Kind::pair) {
    Ref ib = inverse(n.b);
    Ref ia = inverse(n.a);
    r = concat(ib, ia);
  } else {
    r = power(inverse(n.a), n.k);
  }
  inverse_memo_.emplace(s, r);
  return r;
}

std::pair<Ref, Ref> Store::split(Ref s) {
  const Node n = nodes_[s];
  if (n.kind == Kind::pair) return {n.a, n.b};
  if (n.kind == Kind::run) return {make_run(n.a, n.k / 2, n.level), make_run(n.a, n.k - n.k / 2, n.level)};
  fail(Errc::assertion_failure, "split of a node without children");
}

Letter Store::letter_at(Ref s, uint64_t i) const {
  if (i >= nodes_[s].len) fail(Errc::index_out_of_range, "letter index out of range");
  while (true) {
    const Node& n = nodes_[s];
    switch (n.kind) {
      case Kind::letter: return static_cast<Letter>(n.a);
      case Kind::pair: {
        uint64_t la = nodes_[n.a].len;
        if (i < la) {
          s = n.a;
        } else {
          i -= la;
          s = n.b;
        }
        break;
      }
      case Kind::run:
        i %= nodes_[n.a].len;
        s = n.a;
        break;
      case Kind::empty: fail(Errc::assertion_failure, "letter_at on empty node");
    }
  }
}

void Store::expand_range(Ref s, uint64_t i, uint64_t j, Word& out) const {
  if (i >= j) return;
  const Node& n = nodes_[s];
  switch (n.kind) {
    case Kind::empty: return;
    case Kind::letter: out.push_back(static_cast<Letter>(n.a)); return;
    case Kind::pair: {
      uint64_t la = nodes_[n.a].len;
      if (i < la) expand_range(n.a, i, std::min(j, la), out);
      if (j > la) expand_range(n.b, i > la ? i - la : 0, j - la, out);
      return;
    }
    case Kind::run: {
      uint64_t xl = nodes_[n.a].len;
      for (uint64_t c = i / xl; c <= (j - 1) / xl; ++c) {
        uint64_t b = c * xl;
        expand_range(n.a, i > b ? i - b : 0, std::min(j - b, xl), out);
      }
      return;
    }
  }
}

Word Store::expand(Ref s, uint64_t cap) const {
  if (nodes_[s].len > cap)
    fail(Errc::cap_exceeded, "expansion of length " + std::to_string(nodes_[s].len) + " exceeds cap " + std::to_string(cap));
  Word w;
  w.reserve(nodes_[s].len);
  expand_range(s, 0, nodes_[s].len, w);
  return w;
}

Word Store::head(Ref s, uint64_t n) const {
  Word w;
  expand_range(s, 0, std::min(n, nodes_[s].len), w);
  return w;
}

Word Store::tail(Ref s, uint64_t n) const {
  Word w;
  uint64_t len = nodes_[s].len;
  expand_range(s, len - std::min(n, len), len, w);
  return w;
}

const State* DfaRunner::map(Ref s) {
  const size_t q = static_cast<size_t>(m_.states);
  if (done_.size() <= s) {
    size_t n = std::max<size_t>(st_.size(), s + 1);
    done_.resize(n, 0);
    maps_.resize(n * q);
  }
  if (done_[s]) return &maps_[s * q];
  const Store::Node& n = st_.node(s);
  std::vector<State> res(q);
  switch (n.kind) {
    case Store::Kind::empty:
      for (size_t i = 0; i < q; ++i) res[i] = static_cast<State>(i);
      break;
    case Store::Kind::letter:
      for (size_t i = 0; i < q; ++i) res[i] = m_.step(static_cast<State>(i), static_cast<Letter>(n.a));
      break;
    case Store::Kind::pair: {
      std::vector<State> ma(map(n.a), map(n.a) + q);
      const State* mb = map(n.b);
      for (size_t i = 0; i < q; ++i) res[i] = mb[ma[i]];
      break;
    }
    case Store::Kind::run: {
      std::vector<State> base(map(n.a), map(n.a) + q), tmp(q);
      for (size_t i = 0; i < q; ++i) res[i] = static_cast<State>(i);
      for (uint64_t k = n.k; k; k >>= 1) {
        if (k & 1) {
          for (size_t i = 0; i < q; ++i) tmp[i] = base[res[i]];
          res.swap(tmp);
        }
        if (k > 1) {
          for (size_t i = 0; i < q; ++i) tmp[i] = base[base[i]];
          base.swap(tmp);
        }
      }
      break;
    }
  }
  if (done_.size() <= s) {
    done_.resize(s + 1, 0);
    maps_.resize((s + 1) * q);
  }
  std::copy(res.begin(), res.end(), maps_.begin() + static_cast<std::ptrdiff_t>(s * q));
  done_[s] = 1;
  return &maps_[s * q];
}

State DfaRunner::run(Ref s, State q) { return map(s)[q]; }

}  // namespace hypslp
