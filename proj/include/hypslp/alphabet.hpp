#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hypslp {

// Letters are positions in the alphabet; position order is the shortlex letter order.
using Letter = uint16_t;
using Word = std::vector<Letter>;

class Alphabet {
 public:
  Alphabet() = default;
  // pairs lists (x, inverse of x); letters not mentioned in any pair get the
  // case-swapped token as inverse when present, and are self-inverse otherwise.
  Alphabet(std::vector<std::string> tokens,
           const std::vector<std::pair<std::string, std::string>>& pairs);

  size_t size() const { return tokens_.size(); }
  Letter inverse(Letter x) const { return inv_[x]; }
  const std::string& token(Letter x) const { return tokens_[x]; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  int find(std::string_view tok) const;
  bool single_char() const { return single_char_; }

  Word invert(const Word& w) const;
  // Words print as concatenated tokens when all tokens are one character and
  // as space separated tokens otherwise; the empty word prints as "1".
  std::string format(const Word& w) const;
  Word parse(std::string_view s) const;

  bool operator==(const Alphabet& o) const { return tokens_ == o.tokens_ && inv_ == o.inv_; }

 private:
  std::vector<std::string> tokens_;
  std::vector<Letter> inv_;
  std::unordered_map<std::string, Letter> index_;
  bool single_char_ = true;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

AlphabetPtr make_alphabet(std::vector<std::string> tokens,
                          const std::vector<std::pair<std::string, std::string>>& pairs = {});

// Shortlex comparison: length first, then lexicographic by letter position.
bool shortlex_less(const Word& u, const Word& v);

Word concat(const Word& u, const Word& v);

}  // namespace hypslp
