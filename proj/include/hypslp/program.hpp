#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hypslp/alphabet.hpp"

namespace hypslp {

// A right-hand-side symbol: a letter or a variable index.
struct Sym {
  bool var = false;
  uint32_t id = 0;
  static Sym letter(Letter a) { return {false, a}; }
  static Sym variable(uint32_t v) { return {true, v}; }
  bool operator==(const Sym&) const = default;
};

struct TerminalRule {
  Word w;
};
struct ConcatRule {
  std::vector<Sym> items;
};
// x[i:j]; j absent means up to the end.
struct CutRule {
  Sym x;
  uint64_t i = 0;
  std::optional<uint64_t> j;
};
// x<a,b> evaluates to slex(a x b^-1).
struct TetherRule {
  Sym x;
  Word a;
  Word b;
};
using Rhs = std::variant<TerminalRule, ConcatRule, CutRule, TetherRule>;

enum class ProgramKind { plain, cut, tethered, tether_cut };
const char* kind_name(ProgramKind k);

// Straight-line program with optional cut and tether operators.  Variables
// are stored in a topological order (every variable only refers to earlier
// ones), unreachable variables are removed and the kind is inferred.
class Program {
 public:
  Program() = default;

  const AlphabetPtr& alphabet() const { return alpha_; }
  size_t size() const { return rhs_.size(); }
  uint32_t start() const { return start_; }
  const Rhs& rhs(uint32_t v) const { return rhs_[v]; }
  const std::string& name(uint32_t v) const { return names_[v]; }
  ProgramKind kind() const { return kind_; }
  bool has_cuts() const { return kind_ == ProgramKind::cut || kind_ == ProgramKind::tether_cut; }
  bool has_tethers() const { return kind_ == ProgramKind::tethered || kind_ == ProgramKind::tether_cut; }

 private:
  friend class ProgramBuilder;
  AlphabetPtr alpha_;
  std::vector<std::string> names_;
  std::vector<Rhs> rhs_;
  uint32_t start_ = 0;
  ProgramKind kind_ = ProgramKind::plain;
};

class ProgramBuilder {
 public:
  explicit ProgramBuilder(AlphabetPtr alpha) : alpha_(std::move(alpha)) {}

  uint32_t add(Rhs r, std::string name = {});
  uint32_t terminal(Word w) { return add(TerminalRule{std::move(w)}); }
  uint32_t concat(std::vector<Sym> items) { return add(ConcatRule{std::move(items)}); }
  uint32_t concat(uint32_t a, uint32_t b) { return add(ConcatRule{{Sym::variable(a), Sym::variable(b)}}); }
  uint32_t cut(uint32_t x, uint64_t i, std::optional<uint64_t> j) { return add(CutRule{Sym::variable(x), i, j}); }
  uint32_t tether(uint32_t x, Word a, Word b) { return add(TetherRule{Sym::variable(x), std::move(a), std::move(b)}); }
  // Replaces the body of a variable added earlier (used by the parser for
  // forward references).
  void set(uint32_t v, Rhs r) { rhs_.at(v) = std::move(r); }
  size_t size() const { return rhs_.size(); }
  const AlphabetPtr& alphabet() const { return alpha_; }

  // Prunes, sorts and validates; throws InvalidProgram on cycles or dangling
  // references.
  Program finish(uint32_t start) const;

 private:
  AlphabetPtr alpha_;
  std::vector<std::string> names_;
  std::vector<Rhs> rhs_;
};

Program trivial_program(AlphabetPtr alpha);
Program word_program(AlphabetPtr alpha, const Word& w);
// Copies the variables of p into the builder and returns the index of its start.
uint32_t embed(ProgramBuilder& b, const Program& p);

struct ProgramMetrics {
  uint64_t size = 0;  // bits
  std::vector<uint32_t> height;
  std::vector<uint32_t> tether_height;
  std::vector<uint32_t> tether_depth;
};
ProgramMetrics metrics(const Program& p);

// `slp v1` text format.
Program parse_program(std::istream& in);
Program parse_program_string(const std::string& text);
Program load_program(const std::string& path);
std::string format_program(const Program& p);

}  // namespace hypslp
