#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "hypslp/errors.hpp"
#include "hypslp/knapsack.hpp"
#include "hypslp/reference.hpp"
#include "hypslp/slp.hpp"

using namespace hypslp;

namespace {

Program wp(const GroupPtr& g, const char* s) { return word_program(g->alphabet(), g->alphabet()->parse(s)); }

Program apow(const GroupPtr& z, int64_t n) {
  Program a = wp(z, n >= 0 ? "a" : "A");
  return power(a, static_cast<uint64_t>(n >= 0 ? n : -n));
}

KnapsackExpression zexpr(const GroupPtr& z, int64_t t, std::vector<int64_t> bs) {
  KnapsackExpression e{apow(z, t), {}};
  for (int64_t b : bs) e.bases.push_back(apow(z, b));
  return e;
}

// Exhaustive lex-least search over [0, cap]^k on integers.
std::optional<std::vector<uint64_t>> brute_linear(const std::vector<int64_t>& a, int64_t t, uint64_t cap) {
  std::vector<uint64_t> n(a.size(), 0);
  while (true) {
    int64_t s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * static_cast<int64_t>(n[i]);
    if (s == t) return n;
    size_t i = a.size();
    while (i > 0 && n[i - 1] == cap) n[--i] = 0;
    if (i == 0) return std::nullopt;
    ++n[i - 1];
  }
}

}  // namespace

TEST_CASE("verify examples") {
  GroupPtr z = free_group(1);
  auto e = zexpr(z, 5, {2, 3});
  CHECK(verify(e, {{1, 1}}, *z));
  CHECK(!verify(e, {{2, 1}}, *z));
  KnapsackExpression empty{trivial_program(z->alphabet()), {}};
  CHECK(verify(empty, {{}}, *z));
  CHECK_THROWS_AS(verify(e, {{1}}, *z), Error);
}

TEST_CASE("solve_bounded examples") {
  GroupPtr z = free_group(1), f2 = free_group(2);
  auto s = solve_bounded(zexpr(z, 7, {2, 3}), 10, *z);
  REQUIRE(s);
  CHECK(s->exponents == std::vector<uint64_t>{2, 1});
  CHECK(!solve_bounded(zexpr(z, 1, {2}), 10, *z));
  KnapsackExpression e{wp(f2, "ab"), {wp(f2, "a"), wp(f2, "b")}};
  auto t = solve_bounded(e, 3, *f2);
  REQUIRE(t);
  CHECK(t->exponents == std::vector<uint64_t>{1, 1});
  CHECK(naive_knapsack(f2->alphabet()->parse("ab"), {f2->alphabet()->parse("a"), f2->alphabet()->parse("b")}, 3,
                       *f2) == std::vector<uint64_t>{1, 1});
}

TEST_CASE("solve examples") {
  GroupPtr z = free_group(1), f2 = free_group(2);
  auto big = zexpr(z, int64_t{1} << 20, {2, 3});
  auto r = solve(big, *z);
  CHECK(r.status == KnapsackOutcome::solved);
  CHECK(r.path == "z-exact");
  REQUIRE(r.solution);
  CHECK(2 * r.solution->exponents[0] + 3 * r.solution->exponents[1] == (uint64_t{1} << 20));
  CHECK(verify(big, *r.solution, *z));

  auto parity = solve(zexpr(z, 1, {2, 4}), *z);
  CHECK(parity.status == KnapsackOutcome::no_solution);

  KnapsackExpression e{wp(f2, "ba"), {wp(f2, "a"), wp(f2, "b")}};
  auto u = solve(e, *f2, {3});
  CHECK(u.status == KnapsackOutcome::unknown);
  CHECK(u.bound == 3);

  GroupPtr s3 = builtin_group("S3");
  KnapsackExpression fe{wp(s3, "ts"), {wp(s3, "t"), wp(s3, "s")}};
  CHECK(solve(KnapsackExpression{wp(s3, "st"), fe.bases}, *s3).status == KnapsackOutcome::no_solution);
  auto fr = solve(fe, *s3);
  REQUIRE(fr.status == KnapsackOutcome::solved);
  CHECK(fr.path == "finite-mod-order");
  CHECK(verify(fe, *fr.solution, *s3));
}

TEST_CASE("linear solver against exhaustive search") {
  Corpus c(7);
  for (int k = 0; k < 3000; ++k) {
    const size_t nb = c.uniform(0, 4);
    std::vector<int64_t> a;
    for (size_t i = 0; i < nb; ++i) a.push_back(static_cast<int64_t>(c.uniform(0, 40)) - 20);
    const int64_t t = static_cast<int64_t>(c.uniform(0, 400)) - 200;
    auto got = solve_linear(a, t);
    const uint64_t cap = nb <= 2 ? 900 : nb == 3 ? 120 : 40;
    auto want = brute_linear(a, t, cap);
    if (want) REQUIRE(got);
    if (!got) continue;
    int64_t s = 0;
    for (size_t i = 0; i < nb; ++i) s += a[i] * static_cast<int64_t>((*got)[i]);
    CHECK(s == t);
    // The box search is lex-least only inside [0, cap]^k.
    if (nb == 0 || *std::max_element(got->begin(), got->end()) <= cap) {
      REQUIRE(want);
      CHECK(*got == *want);
    } else if (want) {
      CHECK(*got < *want);
    }
  }
}

TEST_CASE("compressed verify matches explicit evaluation") {
  GroupPtr f2 = free_group(2);
  auto alpha = f2->alphabet();
  Corpus c(11, CorpusParams{6, 3, 3, 2000, 0.4});
  for (int k = 0; k < 40; ++k) {
    KnapsackExpression e{c.program(alpha), {c.program(alpha), c.program(alpha)}};
    KnapsackSolution s{{c.uniform(0, 3), c.uniform(0, 3)}};
    Word w;
    for (size_t i = 0; i < 2; ++i) {
      Word b = eval(e.bases[i]);
      for (uint64_t j = 0; j < s.exponents[i]; ++j) w.insert(w.end(), b.begin(), b.end());
    }
    const bool want = naive_slex(w, *f2, 1 << 20) == naive_slex(eval(e.target), *f2, 1 << 20);
    CHECK(verify(e, s, *f2) == want);
    // Make it a solution by construction.
    KnapsackExpression e2{concat(power(e.bases[0], s.exponents[0]), power(e.bases[1], s.exponents[1])), e.bases};
    CHECK(verify(e2, s, *f2));
  }
}

TEST_CASE("bounded solutions are monotone in the bound") {
  GroupPtr f2 = free_group(2);
  KnapsackExpression e{wp(f2, "aab"), {wp(f2, "a"), wp(f2, "b")}};
  CHECK(!solve_bounded(e, 1, *f2));
  for (uint64_t b = 2; b < 6; ++b) CHECK(solve_bounded(e, b, *f2) == KnapsackSolution{{2, 1}});
}

TEST_CASE("knap file format") {
  std::istringstream bad("knap v2\n");
  CHECK_THROWS_AS(parse_knapsack(bad), Error);
  std::istringstream no_target("knap v1\nbase x.slp\n");
  CHECK_THROWS_AS(parse_knapsack(no_target), Error);
}
