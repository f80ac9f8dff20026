#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "hypslp/alphabet.hpp"

namespace hypslp {

using State = uint16_t;

// Total deterministic automaton over the letters of an alphabet.
struct Dfa {
  int states = 0;
  State initial = 0;
  std::vector<State> delta;  // delta[q * sigma + a]
  std::vector<bool> accepting;
  int sigma = 0;

  Dfa() = default;
  Dfa(int n, int sigma_, State init);
  State step(State q, Letter a) const { return delta[static_cast<size_t>(q) * sigma + a]; }
  void set(State q, Letter a, State r) { delta[static_cast<size_t>(q) * sigma + a] = r; }
  State run(State q, const Word& w) const;
  bool accepts(const Word& w) const { return accepting[run(initial, w)]; }
};

// `dfa v1` text; transitions name letters by token.
Dfa parse_dfa(std::istream& in, const Alphabet& alpha);
std::string format_dfa(const Dfa& m, const Alphabet& alpha);

}  // namespace hypslp
