#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypslp/group.hpp"
#include "hypslp/program.hpp"
#include "hypslp/shortlex.hpp"

namespace hypslp {

struct ConjugacyConfig {
  // Exponent range searched on backends without an exact path.
  uint64_t n_max = uint64_t{1} << 16;
};

using AuditTrail = std::vector<std::pair<std::string, std::string>>;

struct ConjugacyResult {
  std::optional<Program> witness;  // g with g^-1 u g = v
  AuditTrail audit;
};

struct CentralizerResult {
  std::vector<Program> generators;
  AuditTrail audit;
};

// {j : y^-j u y^j = v} is one of: j = r mod t, {r}, or empty.
struct Trichotomy {
  enum Kind { periodic, unique, none } kind = none;
  int64_t r = 0;
  int64_t t = 0;
};

// Data of the straightening step: z = slex(g^-1 u g)^m is shortlex straight
// and z = y^ell with y the shortest root.  cz lists the elements slex(z_h h)
// that together with powers of y make up the centralizer of z.
struct StraightWitness {
  Word g;
  uint64_t m = 0;
  Program z, y;
  uint64_t ell = 0;
  std::vector<Program> cz;
};

bool is_shortlex_straight(const Program& p, const GroupOracle& g);
// w_R w_L for w = w_L w_R with |w_L| = floor(|w| / 2).
Program central_rotate(const Program& p);
StraightWitness straighten(const Program& u, const GroupOracle& g);

ConjugacyResult conjugacy(const Program& u, const Program& v, const GroupOracle& g, const ConjugacyConfig& cfg = {});
// The same procedure on explicit words; steps 1-3 run without the store when
// the rotated words are at most K long.
std::optional<Word> conjugate_words(const Word& u, const Word& v, const GroupOracle& g);
ConjugacyResult simultaneous_conjugacy(const std::vector<Program>& us, const std::vector<Program>& vs,
                                       const GroupOracle& g, const ConjugacyConfig& cfg = {});
CentralizerResult centralizer(const std::vector<Program>& us, const GroupOracle& g, const ConjugacyConfig& cfg = {});
Trichotomy exponent_solutions(const Program& u, const Program& v, const Program& y, const GroupOracle& g,
                              const ConjugacyConfig& cfg = {});

}  // namespace hypslp
