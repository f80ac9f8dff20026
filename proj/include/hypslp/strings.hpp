#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>

#include "hypslp/dfa.hpp"
#include "hypslp/program.hpp"
#include "hypslp/store.hpp"

namespace hypslp {

bool equals(const Program& p, const Program& q);
// Smallest start of an occurrence of eval(pattern) in eval(text).
std::optional<uint64_t> find_factor(const Program& pattern, const Program& text);
// (H', H'') with q = H' H'' and p = H'' H', smallest |H'|.
std::optional<std::pair<Program, Program>> is_rotation(const Program& p, const Program& q);
bool dfa_accepts(const Dfa& m, const Program& p);
bool all_powers_accepted(const Dfa& m, const Program& p);

// Arithmetic progression {first + k*diff : 0 <= k < count}.
struct Progression {
  uint64_t first = 0;
  uint64_t diff = 0;
  uint64_t count = 0;
  uint64_t last() const { return first + (count ? count - 1 : 0) * diff; }
};

// Occurrences of one compressed pattern in compressed texts of the same
// store.  For a text node Y = Y1 Y2 the occurrences crossing the border of
// Y1 and Y2 form a progression; they are computed from those of the two
// halves of the pattern, and every surviving candidate is confirmed by
// comparing canonical roots of substrings.  Windows of at most
// `brute_limit` letters are scanned explicitly.
class FactorFinder {
 public:
  FactorFinder(Store& st, Ref pattern, uint64_t brute_limit = 4096);
  std::optional<uint64_t> first_in(Ref text);
  Progression crossing(Ref x, Ref y);

 private:
  bool occurs_at(Ref x, Ref y, uint64_t s);
  uint64_t lce(Ref y, uint64_t i, uint64_t j);
  uint64_t lcs(Ref y, uint64_t i, uint64_t j);
  Progression filter_right(const Progression& s, Ref x, uint64_t m1, Ref y);
  Progression filter_left(const Progression& s, Ref x, uint64_t m1, Ref y);

  Store& st_;
  Ref pattern_;
  uint64_t brute_;
  std::unordered_map<uint64_t, Progression> cross_memo_;
  std::unordered_map<Ref, std::optional<uint64_t>> first_memo_;
};

std::optional<uint64_t> find_factor(Store& st, Ref pattern, Ref text, uint64_t brute_limit = 4096);
// Smallest m with p = q[m:] q[:m], if any.
std::optional<uint64_t> rotation_offset(Store& st, Ref p, Ref q);
bool all_powers_accepted(DfaRunner& m, Ref p);

}  // namespace hypslp
