#include "doctest.h"
#include "hypslp/errors.hpp"
#include "hypslp/reference.hpp"
#include "hypslp/shortlex.hpp"
#include "hypslp/slp.hpp"
#include "hypslp/strings.hpp"

using namespace hypslp;

namespace {

Program prog(const std::string& text) { return parse_program_string(text); }

std::string show(const Program& p) { return p.alphabet()->format(eval(p)); }

}  // namespace

TEST_CASE("tethered programs over F2") {
  GroupPtr f2 = free_group(2);
  CHECK(show(tethered_to_slp(prog("slp v1\nalphabet a A b B\nA = 'a' 'b'\nS = A<1,1>\nstart S\n"), *f2)) == "ab");
  CHECK(show(tethered_to_slp(prog("slp v1\nalphabet a A b B\nA = 'A' 'b'\nS = A<a,1>\nstart S\n"), *f2)) == "b");
  CHECK_THROWS_AS(tethered_to_slp(prog("slp v1\nalphabet a A b B\nA = 'a' 'A' 'b'\nS = A<1,1>\nstart S\n"), *f2),
                  Error);
  auto lens = lengths_of_tethered(prog("slp v1\nalphabet a A b B\nA = 'A' 'b'\nS = A<a,1>\nstart S\n"), *f2);
  CHECK(lens == std::vector<uint64_t>{2, 1});
  CHECK(show(tethercut_to_slp(prog("slp v1\nalphabet a A b B\nA = 'a' 'b' 'b'\nS = A[1:]<1,1>\nstart S\n"), *f2)) ==
        "bb");
  CHECK(show(tethercut_to_slp(prog("slp v1\nalphabet a A b B\nA = 'a' 'b' 'a' 'b'\nS = A[:2]\nstart S\n"), *f2)) ==
        "ab");
  CHECK(show(tethercut_to_slp(prog("slp v1\nalphabet a A b B\nA = 'a' 'b'\nS = A[:1]<1,b>\nstart S\n"), *f2)) ==
        "aB");
}

TEST_CASE("within_delta examples") {
  GroupPtr f2 = free_group(2);
  auto a = f2->alphabet();
  auto w = [&](const char* s) { return word_program(a, a->parse(s)); };
  auto r = within_delta(w("ab"), w("abb"), *f2);
  REQUIRE(r);
  CHECK(a->format(*r) == "B");
  CHECK(within_delta(w("ab"), w("ab"), *f2) == Word{});
  CHECK(!within_delta(w("ab"), w("BA"), *f2));
}

TEST_CASE("slp_to_shortlex and order examples") {
  GroupPtr f2 = free_group(2), s3 = builtin_group("S3");
  auto a = f2->alphabet();
  CHECK(show(slp_to_shortlex(word_program(a, a->parse("abBA")), *f2)) == "1");
  Program g20 = example_family(20);
  CHECK(length(slp_to_shortlex(concat(g20, invert(g20)), *f2)) == 0);
  auto sa = s3->alphabet();
  CHECK(show(slp_to_shortlex(word_program(sa, sa->parse("sst")), *s3)) == "t");
  Program g30 = example_family(30);
  CHECK(is_identity(concat(g30, invert(g30)), *f2));
  CHECK(!is_identity(g30, *f2));
  CHECK(is_identity(power(word_program(sa, sa->parse("s")), 2), *s3));
  CHECK(!order(word_program(a, a->parse("a")), *f2));
  CHECK(order(trivial_program(a), *f2) == 1);
  CHECK(order(word_program(sa, sa->parse("st")), *s3) == 3);
}

TEST_CASE("slp_to_shortlex agrees with the reference on random programs") {
  std::vector<GroupPtr> groups{free_group(2), builtin_group("S3"), builtin_group("Z6"), builtin_group("D4"),
                               builtin_group("Q8"), free_group(1), free_group(3)};
  Corpus corpus(20261016, {10, 3, 5, 3000, 0.4});
  for (const GroupPtr& g : groups) {
    for (int k = 0; k < 40; ++k) {
      Program p = corpus.program(g->alphabet());
      Word expect = naive_slex(eval(p), *g);
      Program out = slp_to_shortlex(p, *g);
      INFO(g->describe(), " case ", k);
      CHECK(eval(out) == expect);
      CHECK(dfa_accepts(g->shortlex_acceptor(), out));
    }
  }
}

TEST_CASE("tether agrees with the reference on random geodesic words") {
  GroupPtr f2 = free_group(2);
  auto alpha = f2->alphabet();
  Corpus corpus(7);
  Store st(*alpha);
  Shortlex sl(st, *f2);
  const auto& ball = f2->ball(f2->zeta());
  for (int k = 0; k < 300; ++k) {
    Word x = corpus.reduced_word(alpha, corpus.uniform(0, 600));
    const Word& a = ball[corpus.uniform(0, ball.size() - 1)];
    const Word& b = ball[corpus.uniform(0, ball.size() - 1)];
    Word w = a;
    w.insert(w.end(), x.begin(), x.end());
    Word bi = alpha->invert(b);
    w.insert(w.end(), bi.begin(), bi.end());
    CHECK(st.expand(sl.tether(st.word(x), a, b)) == naive_slex(w, *f2));
  }
  CHECK(audit_counts().failures() == 0);
}
