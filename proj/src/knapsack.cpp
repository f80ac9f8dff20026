#include "hypslp/knapsack.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <queue>

#include "hypslp/errors.hpp"
#include "hypslp/shortlex.hpp"
#include "hypslp/slp.hpp"
#include "text_util.hpp"

namespace hypslp {

namespace {

using i128 = __int128;
constexpr uint64_t kResidueCap = uint64_t{1} << 22;
constexpr uint64_t kStepCap = 1000000;

i128 floor_mod(i128 a, i128 m) {
  i128 r = a % m;
  return r < 0 ? r + m : r;
}

// Smallest n >= 0 with a n = t (mod g), g > 0.
std::optional<i128> solve_congruence(i128 a, i128 t, i128 g) {
  a = floor_mod(a, g);
  t = floor_mod(t, g);
  i128 old_r = a, r = g, old_s = 1, s = 0;
  while (r != 0) {
    i128 q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
  }
  const i128 d = old_r;  // gcd(a, g), with a = 0 giving g
  if (t % d != 0) return std::nullopt;
  const i128 gd = g / d;
  if (gd == 1) return 0;
  return floor_mod(floor_mod(old_s, gd) * (t / d), gd);
}

// What the coefficients a_i, ..., a_k can sum to.
struct Suffix {
  enum Kind { zero, mixed, positive, negative } kind = zero;
  int64_t g = 0;
  int64_t m = 0;
  std::vector<i128> dist;  // least representable value per residue mod m; -1 if none

  bool repr(i128 s) const {  // for positive suffixes
    if (s < 0) return false;
    i128 d = dist[static_cast<size_t>(s % m)];
    return d >= 0 && d <= s;
  }
};

Suffix make_suffix(const std::vector<int64_t>& a, size_t from) {
  Suffix x;
  bool pos = false, neg = false;
  std::vector<int64_t> mags;
  for (size_t i = from; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    (a[i] > 0 ? pos : neg) = true;
    const int64_t v = a[i] > 0 ? a[i] : -a[i];
    mags.push_back(v);
    x.g = std::gcd(x.g, v);
  }
  if (!pos && !neg) return x;
  if (pos && neg) {
    x.kind = Suffix::mixed;
    return x;
  }
  x.kind = pos ? Suffix::positive : Suffix::negative;
  x.m = *std::min_element(mags.begin(), mags.end());
  if (static_cast<uint64_t>(x.m) > kResidueCap)
    fail(Errc::search_budget_exceeded, "smallest coefficient too large for the residue table");
  // Shortest paths over residues modulo m.
  x.dist.assign(x.m, -1);
  using Item = std::pair<i128, int64_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  x.dist[0] = 0;
  pq.push({0, 0});
  while (!pq.empty()) {
    auto [d, r] = pq.top();
    pq.pop();
    if (d != x.dist[r]) continue;
    for (int64_t v : mags) {
      i128 nd = d + v;
      int64_t nr = static_cast<int64_t>((r + v) % x.m);
      if (x.dist[nr] < 0 || nd < x.dist[nr]) {
        x.dist[nr] = nd;
        pq.push({nd, nr});
      }
    }
  }
  return x;
}

bool feasible(const Suffix& s, i128 t) {
  switch (s.kind) {
    case Suffix::zero:
      return t == 0;
    case Suffix::mixed:
      return t % s.g == 0;
    case Suffix::positive:
      return s.repr(t);
    case Suffix::negative:
      return s.repr(-t);
  }
  return false;
}

// Smallest n >= 0 such that t - a n is feasible for s.
std::optional<i128> smallest(const Suffix& s, i128 a, i128 t) {
  switch (s.kind) {
    case Suffix::zero:
      if (a == 0) return t == 0 ? std::optional<i128>(0) : std::nullopt;
      if (t % a != 0 || t / a < 0) return std::nullopt;
      return t / a;
    case Suffix::mixed:
      return solve_congruence(a, t, s.g);
    case Suffix::positive:
    case Suffix::negative: {
      if (s.kind == Suffix::negative) {
        a = -a;
        t = -t;
      }
      if (a == 0) return s.repr(t) ? std::optional<i128>(0) : std::nullopt;
      if (a > 0) {
        // s(n) = t - a n decreases; residues repeat after m steps.
        for (i128 n = 0; n < s.m && t - a * n >= 0; ++n)
          if (s.repr(t - a * n)) return n;
        return std::nullopt;
      }
      const i128 b = -a, P = s.m / std::gcd(static_cast<int64_t>(b % s.m), s.m);
      std::optional<i128> best;
      for (i128 n0 = 0; n0 < P; ++n0) {
        const i128 v = t + b * n0;
        const i128 d = s.dist[static_cast<size_t>(floor_mod(v, s.m))];
        if (d < 0) continue;
        i128 j = 0;
        if (v < d) j = (d - v + b * P - 1) / (b * P);
        const i128 n = n0 + P * j;
        if (!best || n < *best) best = n;
      }
      return best;
    }
  }
  return std::nullopt;
}

struct Loaded {
  Store st;
  Shortlex sl;
  Ref target;
  std::vector<Ref> bases;
  Loaded(const KnapsackExpression& e, const GroupOracle& g) : st(*g.alphabet()), sl(st, g) {
    target = reduce_program(sl, e.target);
    for (const Program& b : e.bases) bases.push_back(reduce_program(sl, b));
  }
  Ref pow(Ref b, uint64_t n) {
    Ref acc = kEmpty;
    for (uint64_t k = n; k; k >>= 1) {
      if (k & 1) acc = sl.combine(acc, b);
      if (k > 1) b = sl.combine(b, b);
    }
    return acc;
  }
};

std::optional<KnapsackSolution> finite_exact(const KnapsackExpression& e, const FiniteGroup& f) {
  const FiniteGroupTable& t = f.table();
  Loaded L(e, f);
  auto elem = [&](Ref r) { return f.element(L.st.expand(r)); };
  const uint32_t target = elem(L.target);
  const size_t k = e.bases.size();
  std::vector<uint32_t> b;
  for (Ref r : L.bases) b.push_back(elem(r));
  // reach[i][x]: x is a product u_i^n_i ... u_k^n_k.
  std::vector<std::vector<bool>> reach(k + 1, std::vector<bool>(t.order, false));
  reach[k][0] = true;
  for (size_t i = k; i-- > 0;) {
    const uint32_t ord = f.element_order(b[i]);
    uint32_t p = 0;
    for (uint32_t n = 0; n < ord; ++n, p = t.mul(p, b[i]))
      for (uint32_t x = 0; x < t.order; ++x)
        if (reach[i + 1][x]) reach[i][t.mul(p, x)] = true;
  }
  if (!reach[0][target]) return std::nullopt;
  KnapsackSolution s;
  uint32_t prefix = 0;
  for (size_t i = 0; i < k; ++i) {
    const uint32_t ord = f.element_order(b[i]);
    uint32_t cur = prefix;
    for (uint32_t n = 0; n < ord; ++n, cur = t.mul(cur, b[i])) {
      // need cur x = target for some x in reach[i+1]
      if (reach[i + 1][t.mul(f.inverse_element(cur), target)]) {
        s.exponents.push_back(n);
        prefix = cur;
        break;
      }
    }
  }
  return s;
}

}  // namespace

std::optional<std::vector<uint64_t>> solve_linear(const std::vector<int64_t>& a, int64_t t) {
  const size_t k = a.size();
  std::vector<Suffix> suf;
  for (size_t i = 0; i <= k; ++i) suf.push_back(make_suffix(a, i));
  if (!feasible(suf[0], t)) return std::nullopt;
  std::vector<uint64_t> n(k);
  i128 rest = t;
  for (size_t i = 0; i < k; ++i) {
    auto x = smallest(suf[i + 1], a[i], rest);
    if (!x) fail(Errc::assertion_failure, "feasible linear system without a next coordinate");
    if (*x > static_cast<i128>(std::numeric_limits<uint64_t>::max()))
      fail(Errc::length_exceeded, "exponent beyond 64 bits");
    n[i] = static_cast<uint64_t>(*x);
    rest -= static_cast<i128>(a[i]) * *x;
  }
  if (rest != 0) fail(Errc::assertion_failure, "linear solution does not sum to the target");
  return n;
}

bool verify(const KnapsackExpression& e, const KnapsackSolution& s, const GroupOracle& g) {
  if (s.exponents.size() != e.bases.size()) fail(Errc::invalid_program, "solution length differs from the number of bases");
  Loaded L(e, g);
  Ref prod = kEmpty;
  for (size_t i = 0; i < L.bases.size(); ++i) prod = L.sl.combine(prod, L.pow(L.bases[i], s.exponents[i]));
  return prod == L.target;
}

std::optional<KnapsackSolution> solve_bounded(const KnapsackExpression& e, uint64_t bound, const GroupOracle& g) {
  Loaded L(e, g);
  const size_t k = L.bases.size();
  KnapsackSolution s;
  s.exponents.assign(k, 0);
  uint64_t steps = 0;
  // Depth-first in lexicographic order.
  auto rec = [&](auto&& self, size_t i, Ref prefix) -> bool {
    if (i == k) return prefix == L.target;
    Ref cur = prefix;
    for (uint64_t n = 0;; ++n) {
      if (++steps > kStepCap) fail(Errc::search_budget_exceeded, "bounded knapsack search over the step cap");
      s.exponents[i] = n;
      if (self(self, i + 1, cur)) return true;
      if (n == bound) break;
      cur = L.sl.combine(cur, L.bases[i]);
    }
    return false;
  };
  if (!rec(rec, 0, kEmpty)) return std::nullopt;
  return s;
}

uint64_t default_bound(const KnapsackExpression& e) {
  uint64_t total = 0;
  auto add = [&](const Program& p) {
    uint64_t n = p.has_tethers() ? uint64_t{1} << 32 : length(p);
    total = total > UINT64_MAX - n ? UINT64_MAX : total + n;
  };
  add(e.target);
  for (const Program& b : e.bases) add(b);
  if (total >= (uint64_t{1} << 32)) return UINT64_MAX;
  return std::max<uint64_t>(1, total * total);
}

KnapsackOutcome solve(const KnapsackExpression& e, const GroupOracle& g, const KnapsackConfig& cfg) {
  KnapsackOutcome out;
  if (g.kind() == GroupKind::free && g.alphabet()->size() == 2) {
    out.path = "z-exact";
    Loaded L(e, g);
    auto value = [&](Ref r) -> int64_t {
      const uint64_t n = L.st.length(r);
      if (n > (uint64_t{1} << 62)) fail(Errc::length_exceeded, "exponent sum beyond 62 bits");
      if (n == 0) return 0;
      return L.st.letter_at(r, 0) == 0 ? static_cast<int64_t>(n) : -static_cast<int64_t>(n);
    };
    std::vector<int64_t> a;
    for (Ref b : L.bases) a.push_back(value(b));
    auto n = solve_linear(a, value(L.target));
    out.status = n ? KnapsackOutcome::solved : KnapsackOutcome::no_solution;
    if (n) out.solution = KnapsackSolution{*n};
  } else if (auto* f = dynamic_cast<const FiniteGroup*>(&g)) {
    out.path = "finite-mod-order";
    out.solution = finite_exact(e, *f);
    out.status = out.solution ? KnapsackOutcome::solved : KnapsackOutcome::no_solution;
  } else {
    out.path = "bounded";
    uint64_t bound = cfg.bound ? cfg.bound : default_bound(e);
    // Keep (bound + 1)^k within the step cap.
    const size_t k = e.bases.size();
    uint64_t fit = 0;
    while (true) {
      long double cells = 1;
      for (size_t i = 0; i < k; ++i) cells *= static_cast<long double>(fit + 2);
      if (cells > kStepCap / 2 || fit + 1 > bound) break;
      ++fit;
    }
    out.bound = k == 0 ? bound : fit;
    out.solution = solve_bounded(e, out.bound, g);
    out.status = out.solution ? KnapsackOutcome::solved : KnapsackOutcome::unknown;
  }
  if (out.solution && !verify(e, *out.solution, g)) fail(Errc::assertion_failure, "knapsack solution failed verification");
  return out;
}

KnapsackExpression parse_knapsack(std::istream& in, const std::string& base_dir) {
  LineReader r(in);
  std::vector<std::string> tok;
  if (!r.next(tok) || tok.size() != 2 || tok[0] != "knap" || tok[1] != "v1")
    fail(Errc::parse_error, r.where() + "expected 'knap v1'");
  KnapsackExpression e;
  bool have_target = false;
  auto resolve = [&](const std::string& f) {
    std::filesystem::path p(f);
    return (p.is_absolute() ? p : std::filesystem::path(base_dir) / p).string();
  };
  while (r.next(tok)) {
    if (tok.size() != 2) fail(Errc::parse_error, r.where() + "expected 'target FILE' or 'base FILE'");
    if (tok[0] == "target") {
      if (have_target) fail(Errc::parse_error, r.where() + "second target");
      e.target = load_program(resolve(tok[1]));
      have_target = true;
    } else if (tok[0] == "base") {
      if (!have_target) fail(Errc::parse_error, r.where() + "base before target");
      e.bases.push_back(load_program(resolve(tok[1])));
    } else {
      fail(Errc::parse_error, r.where() + "unknown keyword '" + tok[0] + "'");
    }
  }
  if (!have_target) fail(Errc::parse_error, "knapsack file without a target");
  for (const Program& b : e.bases)
    if (!(*b.alphabet() == *e.target.alphabet())) fail(Errc::alphabet_mismatch, "knapsack programs over different alphabets");
  return e;
}

KnapsackExpression load_knapsack(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, "cannot open '" + path + "'");
  return parse_knapsack(in, std::filesystem::path(path).parent_path().string());
}

}  // namespace hypslp
