#pragma once

#include <cstdint>
#include <deque>
#include <initializer_list>
#include <unordered_map>
#include <vector>

#include "hypslp/alphabet.hpp"
#include "hypslp/dfa.hpp"

namespace hypslp {

using Ref = uint32_t;
constexpr Ref kEmpty = 0;
constexpr uint64_t kMaxLength = uint64_t{1} << 63;

// Hash-consed store of compressed words in a canonical run-length grammar.
//
// Every word is parsed level by level: odd levels replace maximal blocks x^k
// by run symbols, even levels merge adjacent pairs (x, y) whose level-keyed
// hash bits are (0, 1).  The bits depend only on the structure of a symbol,
// so the parse, and hence the root symbol, is a function of the word alone.
// Operations returning a Ref return such canonical roots; two canonical
// roots are equal iff their words are equal.  Inner nodes of a parse tree
// need not be canonical roots of their own expansion (see canon()).
class Store {
 public:
  enum class Kind : uint8_t { empty, letter, pair, run };
  struct Node {
    Kind kind;
    uint16_t level;
    uint32_t height;  // letters 1, pairs 1 + max, runs as balanced halving
    Ref a;            // pair left, run base, letter index
    Ref b;            // pair right
    uint64_t k;       // run count
    uint64_t len;
    uint64_t hash;
  };

  explicit Store(const Alphabet& alpha);

  size_t sigma() const { return inv_.size(); }
  Ref letter(Letter x) const { return static_cast<Ref>(x) + 1; }
  const Node& node(Ref r) const { return nodes_[r]; }
  uint64_t length(Ref r) const { return nodes_[r].len; }
  size_t size() const { return nodes_.size(); }

  Ref word(const Word& w);
  Ref concat(Ref a, Ref b);
  Ref concat(std::initializer_list<Ref> parts);
  Ref prefix(Ref s, uint64_t i);
  Ref suffix(Ref s, uint64_t i);  // drops the first i letters
  Ref extract(Ref s, uint64_t i, uint64_t j);
  Ref power(Ref s, uint64_t n);
  Ref inverse(Ref s);
  // Canonical root of the expansion of an arbitrary node.
  Ref canon(Ref s);

  Letter letter_at(Ref s, uint64_t i) const;
  Word expand(Ref s, uint64_t cap = uint64_t{1} << 26) const;
  void expand_range(Ref s, uint64_t i, uint64_t j, Word& out) const;
  // Explicit prefix and suffix of bounded length.
  Word head(Ref s, uint64_t n) const;
  Word tail(Ref s, uint64_t n) const;

  // Binary decomposition used by recursive algorithms: pairs split into their
  // children, runs x^k into x^(k/2) and x^(k-k/2).
  std::pair<Ref, Ref> split(Ref s);

 private:
  struct Piece {
    Ref s;
    uint64_t cnt;
    uint32_t top;  // highest level at which the piece is still unmerged
  };
  struct Elem {
    Ref s;
    uint64_t cnt;
  };

  Ref intern(Kind kind, uint16_t level, Ref a, Ref b, uint64_t k);
  Ref make_pair(Ref a, Ref b, uint16_t level) { return intern(Kind::pair, level, a, b, 0); }
  Ref make_run(Ref x, uint64_t k, uint16_t level) {
    return k == 1 ? x : intern(Kind::run, level, x, 0, k);
  }
  bool bit(Ref s, uint32_t level) const;
  Ref build(std::vector<Piece>& left, std::vector<Piece>& right_rev, std::deque<Elem>& x);
  void pull_left(std::vector<Piece>& left, std::deque<Elem>& x, uint32_t lvl);
  void pull_right(std::vector<Piece>& right_rev, std::deque<Elem>& x, uint32_t lvl);
  void compress(std::deque<Elem>& x, uint32_t lvl);
  void prefix_pieces(Ref s, uint64_t i, std::vector<Piece>& out) const;
  void suffix_pieces(Ref s, uint64_t i, std::vector<Piece>& out_rev) const;

  struct KeyHash {
    size_t operator()(const std::pair<uint64_t, uint64_t>& k) const;
  };

  std::vector<Letter> inv_;
  std::vector<Node> nodes_;
  std::unordered_map<std::pair<uint64_t, uint64_t>, Ref, KeyHash> index_;
  std::unordered_map<Ref, Ref> canon_memo_;
  std::unordered_map<Ref, Ref> inverse_memo_;
};

// Evaluates a DFA on stored words through memoized state-transformation maps.
class DfaRunner {
 public:
  DfaRunner(const Store& st, const Dfa& m) : st_(st), m_(m) {}
  State run(Ref s, State q);
  State run(const Word& w, State q) const { return m_.run(q, w); }
  bool accepts(Ref s) { return m_.accepting[run(s, m_.initial)]; }
  const Dfa& dfa() const { return m_; }

 private:
  const State* map(Ref s);

  const Store& st_;
  const Dfa& m_;
  std::vector<State> maps_;
  std::vector<uint8_t> done_;
};

}  // namespace hypslp
