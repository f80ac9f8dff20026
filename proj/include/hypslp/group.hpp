#pragma once

#include <cstdint>
#include <deque>
#include <istream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hypslp/alphabet.hpp"
#include "hypslp/dfa.hpp"

namespace hypslp {

enum class GroupKind { free, finite, custom };

struct ConjConstants {
  uint64_t L = 0;
  uint64_t K = 0;
  uint64_t J = 0;
  uint64_t m_max = 0;
};

// Backend for a hyperbolic group given by a symmetric generating set.
// Words are over alphabet(); elements of short length are handled
// explicitly, everything long goes through the compressed algorithms.
class GroupOracle {
 public:
  virtual ~GroupOracle() = default;

  const AlphabetPtr& alphabet() const { return alpha_; }
  GroupKind kind() const { return kind_; }
  uint32_t delta() const { return delta_; }
  uint32_t zeta() const { return 2 * delta_; }
  uint64_t torsion_bound() const { return torsion_bound_; }
  const Dfa& geodesic_acceptor() const { return geodesic_; }
  const Dfa& shortlex_acceptor() const { return shortlex_; }

  // Shortlex words of all elements of length <= r, in shortlex order.
  // Throws OracleBallTooSmall past max_radius().
  const std::vector<Word>& ball(uint32_t r) const;
  virtual uint32_t max_radius() const { return 6 * delta_; }

  virtual Word slex_short(const Word& w) const = 0;
  // Some g with slex(g^-1 u g) = slex(v), or nothing if none exists within
  // the backend's search range.
  virtual std::optional<Word> explicit_conjugacy(const Word& u, const Word& v) const = 0;

  ConjConstants constants() const;
  std::string describe() const;

 protected:
  virtual std::vector<Word> compute_ball(uint32_t r) const;

  AlphabetPtr alpha_;
  GroupKind kind_ = GroupKind::free;
  uint32_t delta_ = 1;
  uint64_t torsion_bound_ = 1;
  Dfa geodesic_;
  Dfa shortlex_;

 private:
  mutable std::mutex ball_mu_;
  mutable std::deque<std::optional<std::vector<Word>>> balls_;
};

using GroupPtr = std::shared_ptr<const GroupOracle>;

class FreeGroup : public GroupOracle {
 public:
  // Alphabet must consist of rank inverse pairs with no self-inverse letter.
  explicit FreeGroup(AlphabetPtr alpha);
  size_t rank() const { return alpha_->size() / 2; }
  Word slex_short(const Word& w) const override;
  std::optional<Word> explicit_conjugacy(const Word& u, const Word& v) const override;
  // Splits w = p c p^-1 with c cyclically reduced; w must be freely reduced.
  static void cyclic_split(const Alphabet& alpha, const Word& w, Word& p, Word& c);
};

struct FiniteGroupTable {
  uint32_t order = 0;
  std::vector<uint32_t> mult;  // mult[g * order + h]; element 0 is the identity
  std::vector<uint32_t> letter_of;
  uint32_t mul(uint32_t g, uint32_t h) const { return mult[static_cast<size_t>(g) * order + h]; }
};

class FiniteGroup : public GroupOracle {
 public:
  FiniteGroup(FiniteGroupTable table, AlphabetPtr alpha);
  const FiniteGroupTable& table() const { return t_; }
  uint32_t element(const Word& w) const;
  const Word& rep(uint32_t g) const { return rep_[g]; }
  uint32_t element_order(uint32_t g) const;
  uint32_t inverse_element(uint32_t g) const { return inv_[g]; }
  Word slex_short(const Word& w) const override;
  std::optional<Word> explicit_conjugacy(const Word& u, const Word& v) const override;
  uint32_t max_radius() const override { return UINT32_MAX; }

 protected:
  std::vector<Word> compute_ball(uint32_t r) const override;

 private:
  FiniteGroupTable t_;
  std::vector<Word> rep_;
  std::vector<uint32_t> dist_;
  std::vector<uint32_t> inv_;
  std::vector<uint32_t> by_shortlex_;  // elements sorted by representative
};

// Externally computed structure: delta, balls, acceptors and a rewriting
// system producing shortlex normal forms of short words.
class CustomGroup : public GroupOracle {
 public:
  struct Rule {
    Word lhs, rhs;
  };
  CustomGroup(AlphabetPtr alpha, uint32_t delta, uint64_t torsion_bound, std::vector<std::vector<Word>> balls,
              Dfa geodesic, Dfa shortlex, std::vector<Rule> rules);
  Word slex_short(const Word& w) const override;
  std::optional<Word> explicit_conjugacy(const Word& u, const Word& v) const override;
  uint32_t max_radius() const override { return static_cast<uint32_t>(given_.size()) - 1; }

 protected:
  std::vector<Word> compute_ball(uint32_t r) const override;

 private:
  std::vector<std::vector<Word>> given_;
  std::vector<Rule> rules_;
};

GroupPtr free_group(size_t rank);
GroupPtr free_group(AlphabetPtr alpha);
GroupPtr finite_group(FiniteGroupTable table, AlphabetPtr alpha);
// Built-in tables: "S3", "Z6", "D4", "Q8".
GroupPtr builtin_group(const std::string& name);
std::vector<std::string> builtin_group_names();

// `group v1` text format.
GroupPtr parse_group(std::istream& in);
GroupPtr load_group(const std::string& path);
std::string format_group(const GroupOracle& g);

}  // namespace hypslp
