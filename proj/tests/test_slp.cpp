#include <algorithm>

#include "doctest.h"
#include "hypslp/errors.hpp"
#include "hypslp/reference.hpp"
#include "hypslp/slp.hpp"

using namespace hypslp;

namespace {

Word slice(const Word& w, uint64_t i, uint64_t j) { return Word(w.begin() + i, w.begin() + j); }

bool is_cnf(const Program& p) {
  for (uint32_t v = 0; v < p.size(); ++v) {
    const Rhs& r = p.rhs(v);
    if (auto* t = std::get_if<TerminalRule>(&r)) {
      if (t->w.size() > 1) return false;
    } else if (auto* c = std::get_if<ConcatRule>(&r)) {
      if (c->items.size() != 2 || !c->items[0].var || !c->items[1].var) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("example family and parse errors") {
  CHECK(eval(example_family(0)) == free_group(2)->alphabet()->parse("ab"));
  for (unsigned n = 0; n <= 10; ++n) CHECK(length(example_family(n)) == (uint64_t{1} << (n + 1)));
  CHECK(length(example_family(62)) == (uint64_t{1} << 63));
  // a cycle, a dangling reference, a missing start
  CHECK_THROWS_AS(parse_program_string("slp v1\nalphabet a A\nX = Y\nY = X\nstart X\n"), Error);
  CHECK_THROWS_AS(parse_program_string("slp v1\nalphabet a A\nX = Y 'a'\nstart X\n"), Error);
  CHECK_THROWS_AS(parse_program_string("slp v1\nalphabet a A\nX = 'a'\n"), Error);
}

TEST_CASE("program operations agree with explicit evaluation") {
  GroupPtr f2 = free_group(2);
  auto alpha = f2->alphabet();
  Corpus c(31);
  for (int k = 0; k < 300; ++k) {
    Program p = c.program(alpha);
    const Word w = eval(p);
    REQUIRE(length(p) == w.size());

    Program cnf = to_cnf(p);
    CHECK(is_cnf(cnf));
    CHECK(eval(cnf) == w);

    uint64_t i = c.uniform(0, w.size()), j = c.uniform(0, w.size());
    if (i > j) std::swap(i, j);
    CHECK(eval(extract(p, i, j)) == slice(w, i, j));
    if (!w.empty()) {
      uint64_t at = c.uniform(0, w.size() - 1);
      CHECK(letter_at(p, at) == w[at]);
    }

    const uint64_t n = c.uniform(0, 4);
    Word pw;
    for (uint64_t r = 0; r < n; ++r) pw.insert(pw.end(), w.begin(), w.end());
    CHECK(eval(power(p, n)) == pw);
    CHECK(eval(invert(p)) == alpha->invert(w));

    // cut rules inside a program, and their normal form
    ProgramBuilder b(alpha);
    uint32_t s = embed(b, p);
    uint32_t x = b.cut(s, i, j);
    uint32_t y = b.concat(x, s);
    Program q = b.finish(y);
    CHECK(q.has_cuts());
    CHECK(eval(q) == concat(slice(w, i, j), w));
    CHECK(eval(to_cnf(q)) == eval(q));
  }
}

TEST_CASE("letter queries on long programs") {
  Program g = example_family(50);
  auto alpha = free_group(2)->alphabet();
  CHECK(letter_at(g, 0) == alpha->parse("a")[0]);
  CHECK(letter_at(g, (uint64_t{1} << 51) - 1) == alpha->parse("b")[0]);
  CHECK(eval(extract(g, (uint64_t{1} << 50) - 3, (uint64_t{1} << 50) + 3)) == alpha->parse("bababa"));
  CHECK_THROWS_AS(letter_at(g, uint64_t{1} << 51), Error);
}

TEST_CASE("power size grows with the bit length of the exponent") {
  Program p = word_program(free_group(2)->alphabet(), free_group(2)->alphabet()->parse("aab"));
  uint64_t worst = 0;
  for (unsigned k = 1; k < 60; ++k) {
    const uint64_t n = (uint64_t{1} << k) + k;
    const uint64_t a = power(p, n).size(), b = power(p, 2 * n).size();
    worst = std::max(worst, b > a ? b - a : 0);
  }
  CHECK(worst <= 3);
}
