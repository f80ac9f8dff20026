#pragma once

#include <cstdint>
#include <vector>

#include "hypslp/program.hpp"
#include "hypslp/store.hpp"

namespace hypslp {

class GroupOracle;

// Explicit evaluation, the exponential reference path.  Tethers are reduced
// with the oracle's short-word reduction.
Word eval(const Program& p, const GroupOracle* oracle = nullptr, uint64_t max_len = uint64_t{1} << 24);

// Chomsky normal form: every rule is a letter, a pair of variables, or one
// variable under one operator.  Tethers over empty bodies collapse to
// slex(a b^-1), which needs the oracle.
Program to_cnf(const Program& p, const GroupOracle* oracle = nullptr);

// Lengths of all variables of a plain or cut program.
std::vector<uint64_t> variable_lengths(const Program& p);
uint64_t length(const Program& p);
Letter letter_at(const Program& p, uint64_t i);
Program extract(const Program& p, uint64_t i, uint64_t j);
Program power(const Program& p, uint64_t n);
Program invert(const Program& p);
Program concat(const std::vector<Program>& parts);
Program concat(const Program& a, const Program& b);

// The doubling family: A_0 = ab, A_{i+1} = A_i A_i over the letters a A b B.
Program example_family(unsigned n);

// Loads a plain or cut program into a store (cuts become extracts).
Ref to_store(Store& st, const Program& p);
// Exports a stored word as a plain program in Chomsky normal form.
Program from_store(const Store& st, Ref r, const AlphabetPtr& alpha);

}  // namespace hypslp
