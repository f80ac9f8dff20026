#include "hypslp/slp.hpp"

#include <algorithm>
#include <unordered_map>

#include "hypslp/errors.hpp"
#include "hypslp/group.hpp"

namespace hypslp {

namespace {

void require_alphabet(const Program& p, const GroupOracle* oracle) {
  if (oracle && !(*oracle->alphabet() == *p.alphabet()))
    fail(Errc::alphabet_mismatch, "program and group use different alphabets");
}

uint64_t add_len(uint64_t a, uint64_t b) {
  if (a > kMaxLength - b) fail(Errc::length_exceeded, "word length exceeds 2^63");
  return a + b;
}

}  // namespace

Word eval(const Program& p, const GroupOracle* oracle, uint64_t max_len) {
  if (p.has_tethers()) {
    if (!oracle) fail(Errc::missing_oracle, "tethered program needs a group");
    require_alphabet(p, oracle);
  }
  std::vector<Word> val(p.size());
  auto sym = [&](const Sym& s) -> Word { return s.var ? val[s.id] : Word{static_cast<Letter>(s.id)}; };
  auto check = [&](const Word& w) {
    if (w.size() > max_len) fail(Errc::length_exceeded, "evaluation exceeds " + std::to_string(max_len) + " letters");
  };
  for (uint32_t v = 0; v < p.size(); ++v) {
    const Rhs& r = p.rhs(v);
    Word w;
    if (auto* t = std::get_if<TerminalRule>(&r)) {
      w = t->w;
    } else if (auto* c = std::get_if<ConcatRule>(&r)) {
      uint64_t n = 0;
      for (const Sym& s : c->items) n = add_len(n, s.var ? val[s.id].size() : 1);
      if (n > max_len) fail(Errc::length_exceeded, "evaluation exceeds " + std::to_string(max_len) + " letters");
      for (const Sym& s : c->items) {
        if (s.var)
          w.insert(w.end(), val[s.id].begin(), val[s.id].end());
        else
          w.push_back(static_cast<Letter>(s.id));
      }
    } else if (auto* c = std::get_if<CutRule>(&r)) {
      Word x = sym(c->x);
      uint64_t j = c->j.value_or(x.size());
      if (c->i > j || j > x.size()) fail(Errc::index_out_of_range, "cut [" + std::to_string(c->i) + ":" + std::to_string(j) + "] of a word of length " + std::to_string(x.size()));
      w.assign(x.begin() + static_cast<std::ptrdiff_t>(c->i), x.begin() + static_cast<std::ptrdiff_t>(j));
    } else if (auto* t = std::get_if<TetherRule>(&r)) {
      Word x = concat(concat(t->a, sym(t->x)), p.alphabet()->invert(t->b));
      check(x);
      w = oracle->slex_short(x);
    }
    check(w);
    val[v] = std::move(w);
  }
  return val[p.start()];
}

Program to_cnf(const Program& p, const GroupOracle* oracle) {
  const AlphabetPtr& alpha = p.alphabet();
  ProgramBuilder b(alpha);
  constexpr uint32_t kEps = UINT32_MAX;
  std::vector<uint32_t> letter_var(alpha->size(), kEps);
  auto letter = [&](Letter a) {
    if (letter_var[a] == kEps) letter_var[a] = b.terminal({a});
    return letter_var[a];
  };
  auto join = [&](uint32_t x, uint32_t y) {
    if (x == kEps) return y;
    if (y == kEps) return x;
    return b.concat(x, y);
  };
  auto word = [&](const Word& w) {
    uint32_t acc = kEps;
    for (Letter a : w) acc = join(acc, letter(a));
    return acc;
  };
  std::vector<uint32_t> rep(p.size(), kEps);
  auto sym = [&](const Sym& s) { return s.var ? rep[s.id] : letter(static_cast<Letter>(s.id)); };
  for (uint32_t v = 0; v < p.size(); ++v) {
    const Rhs& r = p.rhs(v);
    if (auto* t = std::get_if<TerminalRule>(&r)) {
      rep[v] = word(t->w);
    } else if (auto* c = std::get_if<ConcatRule>(&r)) {
      uint32_t acc = kEps;
      for (const Sym& s : c->items) acc = join(acc, sym(s));
      rep[v] = acc;
    } else if (auto* c = std::get_if<CutRule>(&r)) {
      uint32_t x = sym(c->x);
      if (x == kEps) {
        if (c->i != 0 || c->j.value_or(0) != 0) fail(Errc::index_out_of_range, "cut of the empty word");
        rep[v] = kEps;
      } else if (c->j && *c->j == c->i) {
        rep[v] = kEps;
      } else {
        rep[v] = b.cut(x, c->i, c->j);
      }
    } else if (auto* t = std::get_if<TetherRule>(&r)) {
      uint32_t x = sym(t->x);
      if (x == kEps) {
        if (!oracle) fail(Errc::missing_oracle, "tether over an empty body needs a group");
        rep[v] = word(oracle->slex_short(concat(t->a, alpha->invert(t->b))));
      } else {
        rep[v] = b.tether(x, t->a, t->b);
      }
    }
  }
  uint32_t s = rep[p.start()];
  if (s == kEps) return trivial_program(alpha);
  return b.finish(s);
}

std::vector<uint64_t> variable_lengths(const Program& p) {
  if (p.has_tethers()) fail(Errc::kind_unsupported, "lengths of tethered programs need the shortlex compiler");
  std::vector<uint64_t> len(p.size());
  auto sym = [&](const Sym& s) { return s.var ? len[s.id] : uint64_t{1}; };
  for (uint32_t v = 0; v < p.size(); ++v) {
    const Rhs& r = p.rhs(v);
    if (auto* t = std::get_if<TerminalRule>(&r)) {
      len[v] = t->w.size();
    } else if (auto* c = std::get_if<ConcatRule>(&r)) {
      uint64_t n = 0;
      for (const Sym& s : c->items) n = add_len(n, sym(s));
      len[v] = n;
    } else if (auto* c = std::get_if<CutRule>(&r)) {
      uint64_t n = sym(c->x), j = c->j.value_or(n);
      if (c->i > j || j > n)
        fail(Errc::index_out_of_range, "cut [" + std::to_string(c->i) + ":" + std::to_string(j) + "] of a word of length " + std::to_string(n));
      len[v] = j - c->i;
    }
  }
  return len;
}

uint64_t length(const Program& p) { return variable_lengths(p)[p.start()]; }

Letter letter_at(const Program& p, uint64_t i) {
  std::vector<uint64_t> len = variable_lengths(p);
  if (i >= len[p.start()])
    fail(Errc::index_out_of_range, "index " + std::to_string(i) + " outside word of length " + std::to_string(len[p.start()]));
  uint32_t v = p.start();
  while (true) {
    const Rhs& r = p.rhs(v);
    if (auto* t = std::get_if<TerminalRule>(&r)) return t->w[i];
    Sym next;
    if (auto* c = std::get_if<ConcatRule>(&r)) {
      for (const Sym& s : c->items) {
        uint64_t n = s.var ? len[s.id] : 1;
        if (i < n) {
          next = s;
          break;
        }
        i -= n;
      }
    } else {
      const auto& cut = std::get<CutRule>(r);
      next = cut.x;
      i += cut.i;
    }
    if (!next.var) return static_cast<Letter>(next.id);
    v = next.id;
  }
}

Ref to_store(Store& st, const Program& p) {
  if (p.has_tethers()) fail(Errc::kind_unsupported, "tethered program needs the shortlex compiler");
  if (st.sigma() != p.alphabet()->size()) fail(Errc::alphabet_mismatch, "store alphabet differs from program alphabet");
  std::vector<Ref> val(p.size(), kEmpty);
  auto sym = [&](const Sym& s) { return s.var ? val[s.id] : st.letter(static_cast<Letter>(s.id)); };
  for (uint32_t v = 0; v < p.size(); ++v) {
    const Rhs& r = p.rhs(v);
    if (auto* t = std::get_if<TerminalRule>(&r)) {
      val[v] = st.word(t->w);
    } else if (auto* c = std::get_if<ConcatRule>(&r)) {
      // Balanced folding keeps intermediate results small for long bodies.
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
      val[v] = st.extract(x, c->i, c->j.value_or(st.length(x)));
    }
  }
  return val[p.start()];
}

Program from_store(const Store& st, Ref r, const AlphabetPtr& alpha) {
  if (r == kEmpty) return trivial_program(alpha);
  ProgramBuilder b(alpha);
  std::unordered_map<Ref, uint32_t> var;
  // Post-order over the node DAG without recursion.
  std::vector<std::pair<Ref, bool>> stack{{r, false}};
  while (!stack.empty()) {
    auto [x, ready] = stack.back();
    stack.pop_back();
    if (var.count(x)) continue;
    const Store::Node& n = st.node(x);
    if (n.kind == Store::Kind::letter) {
      var[x] = b.terminal({static_cast<Letter>(n.a)});
      continue;
    }
    if (!ready) {
      stack.push_back({x, true});
      stack.push_back({n.a, false});
      if (n.kind == Store::Kind::pair) stack.push_back({n.b, false});
      continue;
    }
    if (n.kind == Store::Kind::pair) {
      var[x] = b.concat(var.at(n.a), var.at(n.b));
    } else {
      uint32_t base = var.at(n.a), acc = UINT32_MAX;
      for (uint64_t k = n.k;; k >>= 1) {
        if (k & 1) acc = acc == UINT32_MAX ? base : b.concat(acc, base);
        if (k <= 1) break;
        base = b.concat(base, base);
      }
      var[x] = acc;
    }
  }
  return b.finish(var.at(r));
}

Program extract(const Program& p, uint64_t i, uint64_t j) {
  Store st(*p.alphabet());
  Ref r = to_store(st, p);
  return from_store(st, st.extract(r, i, j), p.alphabet());
}

Program power(const Program& p, uint64_t n) {
  if (p.kind() != ProgramKind::plain && p.kind() != ProgramKind::cut) fail(Errc::kind_unsupported, "power of a tethered program");
  if (n == 0) return trivial_program(p.alphabet());
  ProgramBuilder b(p.alphabet());
  uint32_t base = embed(b, p), acc = UINT32_MAX;
  for (uint64_t k = n;; k >>= 1) {
    if (k & 1) acc = acc == UINT32_MAX ? base : b.concat(acc, base);
    if (k <= 1) break;
    base = b.concat(base, base);
  }
  return b.finish(acc);
}

Program invert(const Program& p) {
  if (p.kind() != ProgramKind::plain) fail(Errc::kind_unsupported, "invert needs a plain program");
  const Alphabet& alpha = *p.alphabet();
  ProgramBuilder b(p.alphabet());
  for (uint32_t v = 0; v < p.size(); ++v) {
    const Rhs& r = p.rhs(v);
    if (auto* t = std::get_if<TerminalRule>(&r)) {
      b.add(TerminalRule{alpha.invert(t->w)}, p.name(v));
    } else {
      ConcatRule c = std::get<ConcatRule>(r);
      std::reverse(c.items.begin(), c.items.end());
      for (Sym& s : c.items)
        if (!s.var) s.id = alpha.inverse(static_cast<Letter>(s.id));
      b.add(c, p.name(v));
    }
  }
  return b.finish(p.start());
}

Program concat(const std::vector<Program>& parts) {
  if (parts.empty()) fail(Errc::invalid_program, "concat of no programs");
  ProgramBuilder b(parts[0].alphabet());
  std::vector<Sym> items;
  for (const Program& q : parts) items.push_back(Sym::variable(embed(b, q)));
  return b.finish(b.concat(items));
}

Program concat(const Program& a, const Program& b) { return concat(std::vector<Program>{a, b}); }

Program example_family(unsigned n) {
  ProgramBuilder b(make_alphabet({"a", "A", "b", "B"}));
  uint32_t v = b.add(TerminalRule{{0, 2}}, "A0");
  for (unsigned i = 1; i <= n; ++i) v = b.add(ConcatRule{{Sym::variable(v), Sym::variable(v)}}, "A" + std::to_string(i));
  return b.finish(v);
}

}  // namespace hypslp
