#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "hypslp/group.hpp"
#include "hypslp/program.hpp"

namespace hypslp {

// u^-1 u_1^* ... u_k^*: a solution is (n_1, ..., n_k) with u = u_1^n_1 ... u_k^n_k.
struct KnapsackExpression {
  Program target;
  std::vector<Program> bases;
};

struct KnapsackSolution {
  std::vector<uint64_t> exponents;
  bool operator==(const KnapsackSolution&) const = default;
};

struct KnapsackConfig {
  // Exponent bound for backends without an exact method; 0 picks the
  // default heuristic (see default_bound).
  uint64_t bound = 0;
};

struct KnapsackOutcome {
  enum Status { solved, no_solution, unknown } status = unknown;
  std::optional<KnapsackSolution> solution;
  uint64_t bound = 0;  // the bound that was exhausted when unknown
  std::string path;    // "z-exact", "finite-mod-order", "bounded"
};

bool verify(const KnapsackExpression& e, const KnapsackSolution& s, const GroupOracle& g);
// Lexicographically least solution with every n_i <= bound.
std::optional<KnapsackSolution> solve_bounded(const KnapsackExpression& e, uint64_t bound, const GroupOracle& g);
KnapsackOutcome solve(const KnapsackExpression& e, const GroupOracle& g, const KnapsackConfig& cfg = {});
// (sum of lengths)^2, capped; a heuristic stand-in for the unspecified
// polynomial bound on exponents.
uint64_t default_bound(const KnapsackExpression& e);

// Lexicographically least nonnegative solution of sum a_i n_i = t over the
// integers, or nothing.
std::optional<std::vector<uint64_t>> solve_linear(const std::vector<int64_t>& a, int64_t t);

// `knap v1`: `target FILE` then `base FILE` lines; relative paths resolve
// against base_dir.
KnapsackExpression parse_knapsack(std::istream& in, const std::string& base_dir = ".");
KnapsackExpression load_knapsack(const std::string& path);

}  // namespace hypslp
