#include "hypslp/group.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hypslp/errors.hpp"
#include "text_util.hpp"

namespace hypslp {

// ---- GroupOracle ---------------------------------------------------------

const std::vector<Word>& GroupOracle::ball(uint32_t r) const {
  if (r > max_radius())
    fail(Errc::oracle_ball_too_small,
         "ball of radius " + std::to_string(r) + " requested, backend provides " + std::to_string(max_radius()));
  std::lock_guard<std::mutex> lock(ball_mu_);
  if (balls_.size() <= r) balls_.resize(r + 1);
  if (!balls_[r]) balls_[r] = compute_ball(r);
  return *balls_[r];
}

std::vector<Word> GroupOracle::compute_ball(uint32_t r) const {
  // Layered closure: every element of length k is a length k-1 element times a letter.
  std::set<Word> seen{Word{}};
  std::vector<Word> layer{Word{}};
  for (uint32_t k = 1; k <= r; ++k) {
    std::set<Word> next;
    for (const Word& w : layer)
      for (Letter a = 0; a < alpha_->size(); ++a) {
        Word x = w;
        x.push_back(a);
        Word s = slex_short(x);
        if (s.size() == k && !seen.count(s)) next.insert(s);
      }
    layer.assign(next.begin(), next.end());
    seen.insert(next.begin(), next.end());
  }
  std::vector<Word> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), shortlex_less);
  return out;
}

ConjConstants GroupOracle::constants() const {
  ConjConstants c;
  c.L = 34 * uint64_t{delta_} + 2;
  c.K = (17 * (2 * c.L + 1) + 6) / 7;
  c.J = ball(2 * delta_).size();
  uint64_t b4 = ball(std::min<uint32_t>(4 * delta_, max_radius())).size();
  c.m_max = b4 * b4;
  return c;
}

std::string GroupOracle::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case GroupKind::free: os << "free group of rank " << alpha_->size() / 2; break;
    case GroupKind::finite: os << "finite group of order " << torsion_bound_; break;
    case GroupKind::custom: os << "custom group"; break;
  }
  os << ", delta " << delta_;
  return os.str();
}

// ---- free groups ---------------------------------------------------------

FreeGroup::FreeGroup(AlphabetPtr alpha) {
  alpha_ = std::move(alpha);
  kind_ = GroupKind::free;
  delta_ = 1;
  torsion_bound_ = 1;
  const int sigma = static_cast<int>(alpha_->size());
  if (sigma == 0 || sigma % 2) fail(Errc::consistency_error, "free group alphabet must have even size");
  for (Letter a = 0; a < sigma; ++a)
    if (alpha_->inverse(a) == a) fail(Errc::consistency_error, "free group letter '" + alpha_->token(a) + "' is self-inverse");
  // State 0 is the start, state a+1 remembers the last letter a, state sigma+1 is dead.
  Dfa m(sigma + 2, sigma, 0);
  const State dead = static_cast<State>(sigma + 1);
  for (int q = 0; q <= sigma + 1; ++q) {
    m.accepting[q] = q != dead;
    for (Letter a = 0; a < sigma; ++a) {
      State to = static_cast<State>(a + 1);
      if (q == dead || (q > 0 && alpha_->inverse(static_cast<Letter>(q - 1)) == a)) to = dead;
      m.set(static_cast<State>(q), a, to);
    }
  }
  geodesic_ = m;
  shortlex_ = m;
}

Word FreeGroup::slex_short(const Word& w) const {
  Word out;
  out.reserve(w.size());
  for (Letter a : w) {
    if (!out.empty() && out.back() == alpha_->inverse(a))
      out.pop_back();
    else
      out.push_back(a);
  }
  return out;
}

void FreeGroup::cyclic_split(const Alphabet& alpha, const Word& w, Word& p, Word& c) {
  size_t i = 0, n = w.size();
  while (2 * i + 1 < n && w[i] == alpha.inverse(w[n - 1 - i])) ++i;
  p.assign(w.begin(), w.begin() + i);
  c.assign(w.begin() + i, w.end() - i);
}

std::optional<Word> FreeGroup::explicit_conjugacy(const Word& u, const Word& v) const {
  Word p, cu, q, cv;
  cyclic_split(*alpha_, slex_short(u), p, cu);
  cyclic_split(*alpha_, slex_short(v), q, cv);
  if (cu.size() != cv.size()) return std::nullopt;
  const size_t n = cu.size();
  for (size_t k = 0; k <= n; ++k) {
    if (k == n && n) break;
    // cv = x^-1 cu x with cu = x y, i.e. cv = y x.
    bool ok = true;
    for (size_t t = 0; t < n && ok; ++t) ok = cv[t] == cu[(t + k) % n];
    if (!ok) continue;
    Word x(cu.begin(), cu.begin() + k);
    return slex_short(concat(concat(p, x), alpha_->invert(q)));
  }
  return std::nullopt;
}

GroupPtr free_group(AlphabetPtr alpha) { return std::make_shared<FreeGroup>(std::move(alpha)); }

GroupPtr free_group(size_t rank) {
  if (rank == 0 || rank > 13) fail(Errc::parse_error, "free group rank must be in 1..13");
  std::vector<std::string> tokens;
  for (size_t i = 0; i < rank; ++i) {
    tokens.push_back(std::string(1, static_cast<char>('a' + i)));
    tokens.push_back(std::string(1, static_cast<char>('A' + i)));
  }
  return free_group(make_alphabet(tokens));
}

// ---- finite groups -------------------------------------------------------

FiniteGroup::FiniteGroup(FiniteGroupTable table, AlphabetPtr alpha) : t_(std::move(table)) {
  alpha_ = std::move(alpha);
  kind_ = GroupKind::finite;
  const uint32_t n = t_.order;
  const size_t sigma = alpha_->size();
  if (n == 0 || t_.mult.size() != static_cast<size_t>(n) * n)
    fail(Errc::consistency_error, "multiplication table has wrong shape");
  for (uint32_t x : t_.mult)
    if (x >= n) fail(Errc::consistency_error, "table entry out of range");
  if (t_.letter_of.size() != sigma) fail(Errc::consistency_error, "letter map does not cover the alphabet");
  for (uint32_t x : t_.letter_of)
    if (x >= n) fail(Errc::consistency_error, "letter mapped outside the group");
  for (uint32_t g = 0; g < n; ++g)
    if (t_.mul(0, g) != g || t_.mul(g, 0) != g) fail(Errc::consistency_error, "element 0 is not the identity");
  inv_.assign(n, n);
  for (uint32_t g = 0; g < n; ++g)
    for (uint32_t h = 0; h < n; ++h)
      if (t_.mul(g, h) == 0) inv_[g] = h;
  for (uint32_t g = 0; g < n; ++g)
    if (inv_[g] == n) fail(Errc::consistency_error, "element without inverse");
  // All triples for small groups, a deterministic sample otherwise.
  uint64_t checks = 0;
  for (uint64_t s = 0; checks < 20000 && s < uint64_t{n} * n * n; s += (n <= 24 ? 1 : 7919), ++checks) {
    uint32_t a = static_cast<uint32_t>(s % n), b = static_cast<uint32_t>(s / n % n), c = static_cast<uint32_t>(s / n / n % n);
    if (t_.mul(t_.mul(a, b), c) != t_.mul(a, t_.mul(b, c))) fail(Errc::consistency_error, "table is not associative");
  }
  for (Letter a = 0; a < sigma; ++a)
    if (t_.letter_of[alpha_->inverse(a)] != inv_[t_.letter_of[a]])
      fail(Errc::consistency_error, "inverse letter of '" + alpha_->token(a) + "' is not mapped to the inverse element");

  // BFS in shortlex order gives shortlex-least representatives.
  rep_.assign(n, Word{});
  dist_.assign(n, UINT32_MAX);
  dist_[0] = 0;
  std::vector<uint32_t> queue{0};
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    uint32_t g = queue[qi];
    for (Letter a = 0; a < sigma; ++a) {
      uint32_t h = t_.mul(g, t_.letter_of[a]);
      if (dist_[h] != UINT32_MAX) continue;
      dist_[h] = dist_[g] + 1;
      rep_[h] = rep_[g];
      rep_[h].push_back(a);
      queue.push_back(h);
    }
  }
  if (queue.size() != n)
    fail(Errc::not_generating, "letters generate " + std::to_string(queue.size()) + " of " + std::to_string(n) + " elements");
  by_shortlex_ = queue;
  uint32_t diam = 0;
  for (uint32_t d : dist_) diam = std::max(diam, d);
  delta_ = std::max<uint32_t>(diam, 1);
  torsion_bound_ = n;

  Dfa geo(static_cast<int>(n) + 1, static_cast<int>(sigma), 0), slx(static_cast<int>(n) + 1, static_cast<int>(sigma), 0);
  const State dead = static_cast<State>(n);
  for (uint32_t g = 0; g <= n; ++g) {
    geo.accepting[g] = slx.accepting[g] = g != n;
    for (Letter a = 0; a < sigma; ++a) {
      if (g == n) {
        geo.set(dead, a, dead);
        slx.set(dead, a, dead);
        continue;
      }
      uint32_t h = t_.mul(g, t_.letter_of[a]);
      geo.set(static_cast<State>(g), a, dist_[h] == dist_[g] + 1 ? static_cast<State>(h) : dead);
      bool sl = dist_[h] == dist_[g] + 1 && rep_[h].back() == a &&
                std::equal(rep_[g].begin(), rep_[g].end(), rep_[h].begin());
      slx.set(static_cast<State>(g), a, sl ? static_cast<State>(h) : dead);
    }
  }
  geodesic_ = geo;
  shortlex_ = slx;
}

uint32_t FiniteGroup::element(const Word& w) const {
  uint32_t g = 0;
  for (Letter a : w) g = t_.mul(g, t_.letter_of[a]);
  return g;
}

uint32_t FiniteGroup::element_order(uint32_t g) const {
  uint32_t k = 1, x = g;
  while (x != 0) {
    x = t_.mul(x, g);
    ++k;
  }
  return k;
}

Word FiniteGroup::slex_short(const Word& w) const { return rep_[element(w)]; }

std::optional<Word> FiniteGroup::explicit_conjugacy(const Word& u, const Word& v) const {
  uint32_t eu = element(u), ev = element(v);
  for (uint32_t g : by_shortlex_)
    if (t_.mul(t_.mul(inv_[g], eu), g) == ev) return rep_[g];
  return std::nullopt;
}

std::vector<Word> FiniteGroup::compute_ball(uint32_t r) const {
  std::vector<Word> out;
  for (uint32_t g : by_shortlex_)
    if (dist_[g] <= r) out.push_back(rep_[g]);
  return out;
}

GroupPtr finite_group(FiniteGroupTable table, AlphabetPtr alpha) {
  return std::make_shared<FiniteGroup>(std::move(table), std::move(alpha));
}

namespace {

using Perm = std::vector<uint32_t>;

// Closure of permutation generators; products compose left to right.
FiniteGroupTable close_perms(const std::vector<Perm>& gens) {
  const size_t deg = gens.at(0).size();
  Perm id(deg);
  for (size_t i = 0; i < deg; ++i) id[i] = static_cast<uint32_t>(i);
  auto mul = [](const Perm& g, const Perm& h) {
    Perm r(g.size());
    for (size_t i = 0; i < g.size(); ++i) r[i] = h[g[i]];
    return r;
  };
  std::vector<Perm> elems{id};
  std::map<Perm, uint32_t> index{{id, 0}};
  for (size_t i = 0; i < elems.size(); ++i)
    for (const Perm& g : gens) {
      Perm x = mul(elems[i], g);
      if (index.emplace(x, static_cast<uint32_t>(elems.size())).second) elems.push_back(x);
    }
  FiniteGroupTable t;
  t.order = static_cast<uint32_t>(elems.size());
  t.mult.resize(static_cast<size_t>(t.order) * t.order);
  for (uint32_t a = 0; a < t.order; ++a)
    for (uint32_t b = 0; b < t.order; ++b) t.mult[static_cast<size_t>(a) * t.order + b] = index.at(mul(elems[a], elems[b]));
  for (const Perm& g : gens) t.letter_of.push_back(index.at(g));
  return t;
}

Perm invert_perm(const Perm& p) {
  Perm r(p.size());
  for (size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<uint32_t>(i);
  return r;
}

}  // namespace

std::vector<std::string> builtin_group_names() { return {"S3", "Z6", "D4", "Q8"}; }

GroupPtr builtin_group(const std::string& name) {
  if (name == "S3") {
    return finite_group(close_perms({{1, 0, 2}, {0, 2, 1}}), make_alphabet({"s", "t"}));
  }
  if (name == "Z6") {
    Perm a{1, 2, 3, 4, 5, 0};
    return finite_group(close_perms({a, invert_perm(a)}), make_alphabet({"a", "A"}));
  }
  if (name == "D4") {
    return finite_group(close_perms({{0, 3, 2, 1}, {1, 0, 3, 2}}), make_alphabet({"s", "t"}));
  }
  if (name == "Q8") {
    // Right regular representation on {±1, ±i, ±j, ±k}, encoded as 4*sign + unit.
    static const int unit_mul[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sign_mul[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    auto right = [&](int y) {
      Perm p(8);
      for (int x = 0; x < 8; ++x) {
        int ux = x % 4, uy = y % 4;
        int s = (x / 4) ^ (y / 4) ^ sign_mul[ux][uy];
        p[x] = static_cast<uint32_t>(4 * s + unit_mul[ux][uy]);
      }
      return p;
    };
    Perm i = right(1), j = right(2);
    return finite_group(close_perms({i, invert_perm(i), j, invert_perm(j)}), make_alphabet({"i", "I", "j", "J"}));
  }
  fail(Errc::parse_error, "unknown built-in group '" + name + "'");
}

// ---- custom groups -------------------------------------------------------

CustomGroup::CustomGroup(AlphabetPtr alpha, uint32_t delta, uint64_t torsion_bound, std::vector<std::vector<Word>> balls,
                         Dfa geodesic, Dfa shortlex, std::vector<Rule> rules)
    : given_(std::move(balls)), rules_(std::move(rules)) {
  alpha_ = std::move(alpha);
  kind_ = GroupKind::custom;
  delta_ = delta;
  torsion_bound_ = torsion_bound;
  geodesic_ = std::move(geodesic);
  shortlex_ = std::move(shortlex);
  const int sigma = static_cast<int>(alpha_->size());
  if (delta_ == 0) fail(Errc::consistency_error, "delta must be positive");
  if (torsion_bound_ == 0) fail(Errc::consistency_error, "torsion_bound must be positive");
  if (geodesic_.sigma != sigma || shortlex_.sigma != sigma) fail(Errc::consistency_error, "acceptor alphabet mismatch");
  if (given_.size() < 2 * delta_ + 1)
    fail(Errc::consistency_error, "balls must be given up to radius 2*delta = " + std::to_string(2 * delta_));
  for (size_t r = 0; r < given_.size(); ++r) {
    const auto& b = given_[r];
    if (b.empty() || !b[0].empty()) fail(Errc::consistency_error, "ball " + std::to_string(r) + " must start with 1");
    for (size_t k = 0; k < b.size(); ++k) {
      if (b[k].size() > r) fail(Errc::consistency_error, "ball " + std::to_string(r) + " has a word longer than the radius");
      if (k && !shortlex_less(b[k - 1], b[k]))
        fail(Errc::consistency_error, "ball " + std::to_string(r) + " is not strictly shortlex increasing");
      if (!shortlex_.accepts(b[k]) || !geodesic_.accepts(b[k]))
        fail(Errc::consistency_error, "ball word '" + alpha_->format(b[k]) + "' rejected by an acceptor");
      if (slex_short(b[k]) != b[k])
        fail(Errc::consistency_error, "ball word '" + alpha_->format(b[k]) + "' is not a normal form of the rules");
    }
    if (r > 0) {
      std::set<Word> cur(b.begin(), b.end());
      for (const Word& w : given_[r - 1])
        if (!cur.count(w)) fail(Errc::consistency_error, "balls are not nested at radius " + std::to_string(r));
      // Every element one letter away from the previous ball lies in this one.
      for (const Word& w : given_[r - 1])
        for (Letter a = 0; a < sigma; ++a) {
          Word x = w;
          x.push_back(a);
          if (!cur.count(slex_short(x)))
            fail(Errc::consistency_error, "ball " + std::to_string(r) + " misses '" + alpha_->format(slex_short(x)) + "'");
        }
    }
  }
}

Word CustomGroup::slex_short(const Word& w) const {
  Word cur = w;
  for (uint64_t steps = 0;; ++steps) {
    if (steps > 100000 + 100 * w.size()) fail(Errc::consistency_error, "rewriting rules do not terminate");
    bool changed = false;
    for (size_t pos = 0; pos < cur.size() && !changed; ++pos)
      for (const Rule& r : rules_) {
        if (r.lhs.size() > cur.size() - pos || !std::equal(r.lhs.begin(), r.lhs.end(), cur.begin() + pos)) continue;
        Word next(cur.begin(), cur.begin() + pos);
        next.insert(next.end(), r.rhs.begin(), r.rhs.end());
        next.insert(next.end(), cur.begin() + pos + r.lhs.size(), cur.end());
        cur.swap(next);
        changed = true;
        break;
      }
    if (!changed) break;
  }
  if (!shortlex_.accepts(cur))
    fail(Errc::consistency_error, "rewriting gives '" + alpha_->format(cur) + "', which the shortlex acceptor rejects");
  return cur;
}

std::optional<Word> CustomGroup::explicit_conjugacy(const Word& u, const Word& v) const {
  Word su = slex_short(u), sv = slex_short(v);
  for (const Word& g : given_.back()) {
    Word x = slex_short(concat(concat(alpha_->invert(g), su), g));
    if (x == sv) return g;
  }
  return std::nullopt;
}

std::vector<Word> CustomGroup::compute_ball(uint32_t r) const { return given_.at(r); }

// ---- text format ---------------------------------------------------------

namespace {

Word parse_token_word(const Alphabet& alpha, const std::string& tok, const LineReader& rd) {
  try {
    if (tok == "1") return {};
    if (alpha.single_char()) return alpha.parse(tok);
    Word w;
    size_t i = 0;
    while (i <= tok.size()) {
      size_t j = tok.find('.', i);
      if (j == std::string::npos) j = tok.size();
      int a = alpha.find(tok.substr(i, j - i));
      if (a < 0) fail(Errc::parse_error, "unknown letter in '" + tok + "'");
      w.push_back(static_cast<Letter>(a));
      i = j + 1;
    }
    return w;
  } catch (const Error& e) {
    fail(Errc::parse_error, rd.where() + e.what());
  }
}

std::string format_token_word(const Alphabet& alpha, const Word& w) {
  if (w.empty()) return "1";
  if (alpha.single_char()) return alpha.format(w);
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) s += (i ? "." : "") + alpha.token(w[i]);
  return s;
}

std::string read_block(LineReader& rd) {
  std::string out, line;
  while (rd.next_raw(line)) {
    out += line + "\n";
    if (line == "end") return out;
  }
  fail(Errc::parse_error, "unterminated dfa block");
}

}  // namespace

GroupPtr parse_group(std::istream& in) {
  LineReader rd(in);
  std::vector<std::string> tk;
  if (!rd.next(tk) || tk.size() != 2 || tk[0] != "group" || tk[1] != "v1") fail(Errc::parse_error, "expected header 'group v1'");
  if (!rd.next(tk)) fail(Errc::parse_error, "missing group type line");
  std::string type = tk[0];
  uint64_t rank = 0;
  if (type == "free") {
    if (tk.size() != 3 || tk[1] != "rank") fail(Errc::parse_error, rd.where() + "expected 'free rank N'");
    rank = parse_uint(tk[2], rd.line());
  } else if (type == "builtin") {
    if (tk.size() != 2) fail(Errc::parse_error, rd.where() + "expected 'builtin NAME'");
    return builtin_group(tk[1]);
  } else if ((type != "finite" && type != "custom") || tk.size() != 1) {
    fail(Errc::parse_error, rd.where() + "group type must be free, finite or custom");
  }
  std::vector<std::string> letters;
  std::vector<std::pair<std::string, std::string>> pairs;
  AlphabetPtr alpha;
  auto need_alpha = [&]() -> const Alphabet& {
    if (!alpha) {
      if (letters.empty()) fail(Errc::parse_error, rd.where() + "'letters' must come first");
      alpha = make_alphabet(letters, pairs);
    }
    return *alpha;
  };
  uint64_t order = 0, delta = 0, torsion = 0;
  std::map<std::string, uint64_t> letter_map;
  std::vector<uint32_t> table;
  std::vector<std::vector<Word>> balls;
  std::vector<CustomGroup::Rule> rules;
  std::optional<Dfa> geo, slx;
  std::string raw;
  while (rd.next(tk)) {
    const std::string& h = tk[0];
    if (h == "letters") {
      if (alpha) fail(Errc::parse_error, rd.where() + "letters after use");
      letters.assign(tk.begin() + 1, tk.end());
    } else if (h == "pair" && tk.size() == 3) {
      if (alpha) fail(Errc::parse_error, rd.where() + "pair after use");
      pairs.emplace_back(tk[1], tk[2]);
    } else if (h == "order" && tk.size() == 2 && type == "finite") {
      order = parse_uint(tk[1], rd.line());
      if (order == 0 || order > 4096) fail(Errc::parse_error, rd.where() + "order must be in 1..4096");
    } else if (h == "letter_map" && type == "finite") {
      for (size_t i = 1; i < tk.size(); ++i) {
        size_t eq = tk[i].find('=');
        if (eq == std::string::npos) fail(Errc::parse_error, rd.where() + "expected letter=index");
        letter_map[tk[i].substr(0, eq)] = parse_uint(tk[i].substr(eq + 1), rd.line());
      }
    } else if (h == "table" && type == "finite") {
      if (order == 0) fail(Errc::parse_error, rd.where() + "'order' must precede 'table'");
      for (uint64_t row = 0; row < order; ++row) {
        if (!rd.next(tk) || tk.size() != order) fail(Errc::parse_error, rd.where() + "table row must have " + std::to_string(order) + " entries");
        for (const auto& x : tk) table.push_back(static_cast<uint32_t>(parse_uint(x, rd.line())));
      }
    } else if (h == "delta" && tk.size() == 2 && type == "custom") {
      delta = parse_uint(tk[1], rd.line());
    } else if (h == "torsion_bound" && tk.size() == 2 && type == "custom") {
      torsion = parse_uint(tk[1], rd.line());
    } else if (h == "ball" && type == "custom") {
      if (tk.size() < 2 || tk[1].back() != ':') fail(Errc::parse_error, rd.where() + "expected 'ball r: words'");
      uint64_t r = parse_uint(tk[1].substr(0, tk[1].size() - 1), rd.line());
      if (r != balls.size()) fail(Errc::parse_error, rd.where() + "balls must be listed by increasing radius from 0");
      std::vector<Word> b;
      for (size_t i = 2; i < tk.size(); ++i) b.push_back(parse_token_word(need_alpha(), tk[i], rd));
      balls.push_back(std::move(b));
    } else if (h == "rule" && type == "custom") {
      if (tk.size() != 4 || tk[2] != "->") fail(Errc::parse_error, rd.where() + "expected 'rule lhs -> rhs'");
      rules.push_back({parse_token_word(need_alpha(), tk[1], rd), parse_token_word(need_alpha(), tk[3], rd)});
      if (rules.back().lhs.empty()) fail(Errc::parse_error, rd.where() + "rule with empty left side");
    } else if ((h == "geodesic_acceptor" || h == "shortlex_acceptor") && type == "custom") {
      std::istringstream block(read_block(rd));
      Dfa m = parse_dfa(block, need_alpha());
      (h == "geodesic_acceptor" ? geo : slx) = std::move(m);
    } else {
      fail(Errc::parse_error, rd.where() + "unrecognised line '" + h + "'");
    }
  }
  if (type == "free") {
    if (letters.empty()) {
      if (!pairs.empty()) fail(Errc::parse_error, "pair lines need a letters line");
      return free_group(rank);
    }
    const Alphabet& a = need_alpha();
    if (a.size() != 2 * rank) fail(Errc::consistency_error, "free group of rank " + std::to_string(rank) + " needs " + std::to_string(2 * rank) + " letters");
    return free_group(alpha);
  }
  const Alphabet& a = need_alpha();
  if (type == "finite") {
    if (table.empty()) fail(Errc::parse_error, "finite group lacks a table");
    FiniteGroupTable t;
    t.order = static_cast<uint32_t>(order);
    t.mult = std::move(table);
    for (Letter x = 0; x < a.size(); ++x) {
      auto it = letter_map.find(a.token(x));
      if (it == letter_map.end()) fail(Errc::parse_error, "letter_map misses '" + a.token(x) + "'");
      t.letter_of.push_back(static_cast<uint32_t>(it->second));
    }
    return finite_group(std::move(t), alpha);
  }
  if (!geo || !slx) fail(Errc::parse_error, "custom group needs geodesic_acceptor and shortlex_acceptor blocks");
  if (delta == 0) fail(Errc::parse_error, "custom group needs a positive delta");
  if (torsion == 0) fail(Errc::parse_error, "custom group needs torsion_bound");
  return std::make_shared<CustomGroup>(alpha, static_cast<uint32_t>(delta), torsion, std::move(balls), std::move(*geo),
                                       std::move(*slx), std::move(rules));
}

GroupPtr load_group(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, "cannot open '" + path + "'");
  return parse_group(in);
}

std::string format_group(const GroupOracle& g) {
  const Alphabet& a = *g.alphabet();
  std::ostringstream os;
  os << "group v1\n";
  auto header = [&] {
    os << "letters";
    for (const auto& t : a.tokens()) os << ' ' << t;
    os << '\n';
    for (Letter x = 0; x < a.size(); ++x)
      if (a.inverse(x) >= x) os << "pair " << a.token(x) << ' ' << a.token(a.inverse(x)) << '\n';
  };
  if (g.kind() == GroupKind::free) {
    os << "free rank " << a.size() / 2 << '\n';
    header();
  } else if (g.kind() == GroupKind::finite) {
    const auto& f = static_cast<const FiniteGroup&>(g);
    const auto& t = f.table();
    os << "finite\n";
    header();
    os << "order " << t.order << "\nletter_map";
    for (Letter x = 0; x < a.size(); ++x) os << ' ' << a.token(x) << '=' << t.letter_of[x];
    os << "\ntable\n";
    for (uint32_t r = 0; r < t.order; ++r) {
      for (uint32_t c = 0; c < t.order; ++c) os << (c ? " " : "") << t.mul(r, c);
      os << '\n';
    }
  } else {
    os << "custom\n";
    header();
    os << "delta " << g.delta() << "\ntorsion_bound " << g.torsion_bound() << '\n';
    for (uint32_t r = 0; r <= g.max_radius(); ++r) {
      os << "ball " << r << ':';
      for (const Word& w : g.ball(r)) os << ' ' << format_token_word(a, w);
      os << '\n';
    }
    os << "# rewriting rules are not recoverable from a loaded oracle\n";
    os << "geodesic_acceptor\n" << format_dfa(g.geodesic_acceptor(), a) << "end\nshortlex_acceptor\n"
       << format_dfa(g.shortlex_acceptor(), a) << "end\n";
  }
  return os.str();
}

}  // namespace hypslp
