#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "hypslp/group.hpp"
#include "hypslp/program.hpp"

namespace hypslp {

// Brute-force references for the test suites.  These do not call the
// backend's own normal-form code: free groups are reduced with a stack and
// finite groups through a breadth-first search over the multiplication table.

constexpr uint64_t kNaiveWordCap = 10000;
constexpr uint64_t kNaiveStepCap = 1000000;

Word naive_slex(const Word& w, const GroupOracle& g, uint64_t cap = kNaiveWordCap);
// Some x with slex(x^-1 u x) = slex(v).  Free groups: cyclic reduction and
// a rotation scan; finite groups: every element; otherwise words of B(radius).
std::optional<Word> naive_conjugate(const Word& u, const Word& v, const GroupOracle& g, uint32_t radius = 0);
// Lexicographically least (n_1, ..., n_k) in [0, bound]^k with
// slex(u_1^n_1 ... u_k^n_k) = slex(target), by enumeration on explicit words.
std::optional<std::vector<uint64_t>> naive_knapsack(const Word& target, const std::vector<Word>& bases,
                                                    uint64_t bound, const GroupOracle& g);

// Parameters for seeded random programs.
struct CorpusParams {
  uint32_t variables = 12;     // concat rules on top of the terminals
  uint32_t terminals = 4;
  uint32_t terminal_len = 4;
  uint64_t max_len = 10000;    // eval length bound
  double inverse_bias = 0.3;   // chance of pairing a block with an inverse block
};

class Corpus {
 public:
  explicit Corpus(uint64_t seed, CorpusParams params = {}) : rng_(seed), params_(params) {}
  // Random plain program; every rule has a mirror rule for its inverse, so
  // products mix long cancelling and non-cancelling blocks.
  Program program(const AlphabetPtr& alpha);
  Word word(const AlphabetPtr& alpha, size_t len);
  // Uniform freely reduced word of the given length (alphabet of inverse pairs).
  Word reduced_word(const AlphabetPtr& alpha, size_t len);
  uint64_t uniform(uint64_t lo, uint64_t hi) { return std::uniform_int_distribution<uint64_t>(lo, hi)(rng_); }
  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  CorpusParams params_;
};

}  // namespace hypslp
