#include <random>

#include "doctest.h"
#include "hypslp/store.hpp"

using namespace hypslp;

namespace {

Word random_word(std::mt19937_64& rng, size_t n, size_t sigma) {
  Word w(n);
  for (auto& x : w) x = static_cast<Letter>(rng() % sigma);
  return w;
}

Word slice(const Word& w, size_t i, size_t j) { return Word(w.begin() + i, w.begin() + j); }

}  // namespace

TEST_CASE("store roots are canonical under every construction") {
  Alphabet alpha({"a", "A", "b", "B"}, {});
  Store st(alpha);
  std::mt19937_64 rng(7);
  for (int round = 0; round < 400; ++round) {
    size_t sigma = 1 + rng() % 4;
    Word u = random_word(rng, rng() % 300, sigma), v = random_word(rng, rng() % 300, sigma);
    if (round % 5 == 0) {
      Word p = random_word(rng, 1 + rng() % 4, sigma);
      u.clear();
      for (size_t k = rng() % 90; k--;) u.insert(u.end(), p.begin(), p.end());
    }
    Ref ru = st.word(u), rv = st.word(v);
    CHECK(st.expand(ru) == u);
    Ref uv = st.concat(ru, rv);
    CHECK(uv == st.word(concat(u, v)));
    if (!u.empty()) {
      size_t i = rng() % (u.size() + 1), j = rng() % (u.size() + 1);
      if (i > j) std::swap(i, j);
      Ref e = st.extract(ru, i, j);
      CHECK(st.expand(e) == slice(u, i, j));
      CHECK(e == st.word(slice(u, i, j)));
      CHECK(st.letter_at(ru, i % u.size()) == u[i % u.size()]);
    }
    CHECK(st.inverse(uv) == st.word(alpha.invert(concat(u, v))));
    uint64_t n = rng() % 7;
    Word pw;
    for (uint64_t k = 0; k < n; ++k) pw = concat(pw, v);
    CHECK(st.power(rv, n) == st.word(pw));
  }
}

TEST_CASE("store handles huge powers without expansion") {
  Alphabet alpha({"a", "b"}, {});
  Store st(alpha);
  Ref ab = st.word({0, 1});
  Ref big = st.power(ab, uint64_t{1} << 60);
  CHECK(st.length(big) == uint64_t{1} << 61);
  CHECK(st.concat(st.power(ab, uint64_t{1} << 59), st.power(ab, uint64_t{1} << 59)) == big);
  CHECK(st.letter_at(big, (uint64_t{1} << 61) - 1) == 1);
  Ref mid = st.extract(big, 3, (uint64_t{1} << 61) - 3);
  CHECK(st.concat({st.word({0, 1, 0}), mid, st.word({1, 0, 1})}) == big);
  CHECK_THROWS(st.power(big, 5));
}
