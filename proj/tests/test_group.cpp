#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "doctest.h"
#include "hypslp/errors.hpp"
#include "hypslp/group.hpp"
#include "hypslp/reference.hpp"

using namespace hypslp;

namespace {

// All words of length <= n.
std::vector<Word> all_words(size_t sigma, size_t n) {
  std::vector<Word> out{{}};
  for (size_t i = 0; i < out.size(); ++i)
    if (out[i].size() < n)
      for (Letter x = 0; x < sigma; ++x) {
        Word w = out[i];
        w.push_back(x);
        out.push_back(w);
      }
  return out;
}

}  // namespace

TEST_CASE("finite backends: acceptors against Cayley graph distances") {
  for (const auto& name : builtin_group_names()) {
    GroupPtr gp = builtin_group(name);
    const auto& g = static_cast<const FiniteGroup&>(*gp);
    const auto& t = g.table();
    const size_t sigma = g.alphabet()->size();
    std::vector<uint32_t> dist(t.order, UINT32_MAX);
    std::deque<uint32_t> q{0};
    dist[0] = 0;
    while (!q.empty()) {
      uint32_t x = q.front();
      q.pop_front();
      for (Letter a = 0; a < sigma; ++a) {
        uint32_t y = t.mul(x, t.letter_of[a]);
        if (dist[y] == UINT32_MAX) dist[y] = dist[x] + 1, q.push_back(y);
      }
    }
    const uint32_t diam = *std::max_element(dist.begin(), dist.end());
    INFO(name);
    for (const Word& w : all_words(sigma, 2 * diam)) {
      uint32_t e = 0;
      for (Letter a : w) e = t.mul(e, t.letter_of[a]);
      CHECK(g.geodesic_acceptor().accepts(w) == (w.size() == dist[e]));
      CHECK(g.shortlex_acceptor().accepts(w) == (g.slex_short(w) == w));
      CHECK(g.slex_short(w) == naive_slex(w, g));
    }
  }
}

TEST_CASE("balls are nested and shortlex increasing") {
  std::vector<GroupPtr> groups{free_group(2), free_group(1), builtin_group("S3"), builtin_group("Q8"),
                               load_group(std::string(HYPSLP_DATA_DIR) + "/z_custom.grp")};
  for (const GroupPtr& g : groups) {
    for (uint32_t r = 0; r < 4; ++r) {
      const auto& b = g->ball(r);
      const auto& c = g->ball(r + 1);
      for (size_t i = 1; i < b.size(); ++i) CHECK(shortlex_less(b[i - 1], b[i]));
      std::set<Word> big(c.begin(), c.end());
      for (const Word& w : b) CHECK(big.count(w));
    }
  }
  CHECK(free_group(2)->ball(2).size() == 17);
}

TEST_CASE("free backend reduces w w^-1 and decides conjugacy") {
  GroupPtr f2 = free_group(2);
  auto alpha = f2->alphabet();
  Corpus c(3);
  for (int k = 0; k < 300; ++k) {
    Word w = c.word(alpha, c.uniform(0, 40));
    CHECK(f2->slex_short(concat(w, alpha->invert(w))).empty());
    Word u = c.word(alpha, c.uniform(0, 7)), v = c.word(alpha, c.uniform(0, 7));
    if (k % 2) {
      Word x = c.word(alpha, c.uniform(0, 4));
      v = concat(concat(alpha->invert(x), u), x);
    }
    auto g = f2->explicit_conjugacy(u, v);
    CHECK(g.has_value() == naive_conjugate(u, v, *f2).has_value());
    if (g) CHECK(f2->slex_short(concat(concat(alpha->invert(*g), u), *g)) == f2->slex_short(v));
  }
}

TEST_CASE("finite backend conjugacy is exhaustive") {
  for (const auto& name : builtin_group_names()) {
    GroupPtr gp = builtin_group(name);
    const auto& g = static_cast<const FiniteGroup&>(*gp);
    auto alpha = g.alphabet();
    for (uint32_t x = 0; x < g.table().order; ++x)
      for (uint32_t y = 0; y < g.table().order; ++y) {
        auto w = g.explicit_conjugacy(g.rep(x), g.rep(y));
        CHECK(w.has_value() == naive_conjugate(g.rep(x), g.rep(y), g).has_value());
        if (w) CHECK(g.slex_short(concat(concat(alpha->invert(*w), g.rep(x)), *w)) == g.rep(y));
      }
  }
}

TEST_CASE("group files round trip and reject bad input") {
  for (const auto& name : builtin_group_names()) {
    GroupPtr g = builtin_group(name);
    std::istringstream in(format_group(*g));
    GroupPtr back = parse_group(in);
    CHECK(format_group(*back) == format_group(*g));
  }
  GroupPtr z = load_group(std::string(HYPSLP_DATA_DIR) + "/z_custom.grp");
  CHECK(z->kind() == GroupKind::custom);
  auto a = z->alphabet();
  CHECK(a->format(z->slex_short(a->parse("aaAAA"))) == "A");
  CHECK(z->explicit_conjugacy(a->parse("a"), a->parse("a")).has_value());
  CHECK(!z->explicit_conjugacy(a->parse("a"), a->parse("A")).has_value());

  std::istringstream bad1("group v2\n");
  CHECK_THROWS_AS(parse_group(bad1), Error);
  std::istringstream bad2("group v1\nfinite\nletters s\npair s s\norder 2\nletter_map s=1\ntable\n0 1\n");
  CHECK_THROWS_AS(parse_group(bad2), Error);
  std::istringstream bad3("group v1\nfree rank 2\nletters a A\npair a A\n");
  CHECK_THROWS_AS(parse_group(bad3), Error);
}
