#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hypslp/group.hpp"
#include "hypslp/program.hpp"
#include "hypslp/store.hpp"

namespace hypslp {

// Process-wide counters of the internal invariant checks: the length
// constraint on the words l_A, r_A and the success of every bounded search.
struct AuditCounts {
  uint64_t length_checks = 0;
  uint64_t length_failures = 0;
  uint64_t searches = 0;
  uint64_t search_failures = 0;
  uint64_t output_checks = 0;
  uint64_t output_failures = 0;
  uint64_t failures() const { return length_failures + search_failures + output_failures; }
};
AuditCounts audit_counts();
void reset_audit();

// Shortlex reduction of words held in a Store.
//
// tether(x, a, b) computes slex(a x b^-1) for a geodesic x.  Every store
// node below x gets a decoration entry: either its word (when short), or
// words l, r with x = l w' r and, on demand, the nodes slex(c w' d^-1) for
// c, d in B(zeta).  Entries are cached per node and shared between calls.
class Shortlex {
 public:
  Shortlex(Store& st, const GroupOracle& g);

  Store& store() { return st_; }
  const GroupOracle& group() const { return g_; }

  Ref tether(Ref x, const Word& a, const Word& b);
  // Some b in B(delta) with g = h b, both geodesic.
  std::optional<Word> within_delta(Ref g, Ref h);
  // slex(u v) for shortlex u and v.
  Ref combine(Ref u, Ref v);
  // slex of an arbitrary word.
  Ref reduce(Ref x);
  bool is_identity(Ref x) { return reduce(x) == kEmpty; }
  // Smallest k in [1, torsion bound] with x^k = 1, or nothing.
  std::optional<uint64_t> order(Ref x);

  bool geodesic(Ref x) { return geo_.accepts(x); }
  bool shortlex(Ref x) { return slx_.accepts(x); }
  DfaRunner& shortlex_runner() { return slx_; }

  // Words of at most this length are reduced explicitly.
  static constexpr uint64_t kExplicit = 48;

 private:
  enum class Mode : uint8_t { explicit_mid, both_long, alias_left, alias_right, right_ext, left_ext };
  struct Entry {
    bool is_short = true;
    Word w;     // short: the word itself
    Word l, r;  // long: x = l w' r
    Mode mode = Mode::explicit_mid;
    Word mid;   // explicit w', r_B l_C, or the extension y / x
    uint32_t eb = 0, ec = 0;
    std::unordered_map<uint32_t, Ref> deco;
  };

  uint32_t entry(Ref x);
  Ref deco(uint32_t e, uint32_t a, uint32_t b);
  uint32_t ball_index(const Word& w);
  Word slex_prod(const Word& a, const Word& mid, const Word& b_inv_of);
  void check_lengths(const Entry& e, uint32_t height);
  void search_failed(const char* what);
  Ref word_ref(const Word& w) { return st_.word(w); }
  bool live(State q) const { return live_[q]; }

  Store& st_;
  const GroupOracle& g_;
  const Dfa& slx_dfa_;
  DfaRunner geo_;
  DfaRunner slx_;
  std::vector<uint8_t> live_;
  const std::vector<Word>& ball_;   // B(zeta)
  const std::vector<Word>& dball_;  // B(delta)
  std::vector<Word> ball_inv_;      // letterwise inverses
  std::map<Word, uint32_t> ball_idx_;
  uint64_t zeta_, T_, Lr_;
  std::unordered_map<Ref, uint32_t> entry_of_;
  std::deque<Entry> entries_;
  std::unordered_map<Ref, Ref> reduced_;
};

// Program-level entry points.  Tethered and tether-cut programs are
// evaluated bottom-up into the store: each tether is reduced by
// Shortlex::tether, each cut by an exact extract.
Program tethered_to_slp(const Program& p, const GroupOracle& g);
Program tethercut_to_slp(const Program& p, const GroupOracle& g);
std::vector<uint64_t> lengths_of_tethered(const Program& p, const GroupOracle& g);
std::optional<Word> within_delta(const Program& p, const Program& q, const GroupOracle& g);
Program slp_to_shortlex(const Program& p, const GroupOracle& g);
bool is_identity(const Program& p, const GroupOracle& g);
std::optional<uint64_t> order(const Program& p, const GroupOracle& g);

// Loads any program kind into the store with its tethers reduced; the
// result is eval(p) as a stored word.
Ref eval_to_store(Shortlex& sl, const Program& p);
// slex(eval(p)); plain programs are reduced along their own productions,
// the other kinds through eval_to_store.
Ref reduce_program(Shortlex& sl, const Program& p);

}  // namespace hypslp
