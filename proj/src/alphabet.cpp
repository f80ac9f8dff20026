#include "hypslp/alphabet.hpp"

#include <cctype>

#include "hypslp/errors.hpp"

namespace hypslp {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::parse_error: return "ParseError";
    case Errc::length_exceeded: return "LengthExceeded";
    case Errc::missing_oracle: return "MissingOracle";
    case Errc::kind_unsupported: return "KindUnsupported";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::alphabet_mismatch: return "AlphabetMismatch";
    case Errc::not_geodesic: return "NotGeodesic";
    case Errc::oracle_ball_too_small: return "OracleBallTooSmall";
    case Errc::assertion_failure: return "AssertionFailure";
    case Errc::search_budget_exceeded: return "SearchBudgetExceeded";
    case Errc::not_generating: return "NotGenerating";
    case Errc::consistency_error: return "ConsistencyError";
    case Errc::cap_exceeded: return "CapExceeded";
    case Errc::invalid_program: return "InvalidProgram";
  }
  return "Error";
}

static std::string swap_case(const std::string& t) {
  std::string r = t;
  for (char& c : r) {
    if (std::islower(static_cast<unsigned char>(c)))
      c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    else if (std::isupper(static_cast<unsigned char>(c)))
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return r;
}

Alphabet::Alphabet(std::vector<std::string> tokens,
                   const std::vector<std::pair<std::string, std::string>>& pairs)
    : tokens_(std::move(tokens)) {
  if (tokens_.empty()) fail(Errc::parse_error, "empty alphabet");
  if (tokens_.size() > 60000) fail(Errc::parse_error, "alphabet too large");
  for (size_t i = 0; i < tokens_.size(); ++i) {
    const std::string& t = tokens_[i];
    if (t.empty() || t == "1" || t.find_first_of(" \t'<>[],:#=") != std::string::npos)
      fail(Errc::parse_error, "bad letter token '" + t + "'");
    if (!index_.emplace(t, static_cast<Letter>(i)).second)
      fail(Errc::parse_error, "duplicate letter '" + t + "'");
    if (t.size() != 1) single_char_ = false;
  }
  const Letter unset = 0xFFFF;
  inv_.assign(tokens_.size(), unset);
  for (const auto& [x, y] : pairs) {
    int a = find(x), b = find(y);
    if (a < 0 || b < 0) fail(Errc::parse_error, "pair names unknown letter");
    if ((inv_[a] != unset && inv_[a] != b) || (inv_[b] != unset && inv_[b] != a))
      fail(Errc::parse_error, "conflicting inverse pairs for '" + x + "'");
    inv_[a] = static_cast<Letter>(b);
    inv_[b] = static_cast<Letter>(a);
  }
  for (size_t i = 0; i < tokens_.size(); ++i) {
    if (inv_[i] != unset) continue;
    int j = find(swap_case(tokens_[i]));
    if (j >= 0 && static_cast<size_t>(j) != i && inv_[j] == unset) {
      inv_[i] = static_cast<Letter>(j);
      inv_[j] = static_cast<Letter>(i);
    } else if (j < 0 || static_cast<size_t>(j) == i) {
      inv_[i] = static_cast<Letter>(i);
    } else {
      fail(Errc::parse_error, "cannot infer inverse of '" + tokens_[i] + "'");
    }
  }
}

int Alphabet::find(std::string_view tok) const {
  auto it = index_.find(std::string(tok));
  return it == index_.end() ? -1 : it->second;
}

Word Alphabet::invert(const Word& w) const {
  Word r(w.size());
  for (size_t i = 0; i < w.size(); ++i) r[w.size() - 1 - i] = inv_[w[i]];
  return r;
}

std::string Alphabet::format(const Word& w) const {
  if (w.empty()) return "1";
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (!single_char_ && i) s += ' ';
    s += tokens_[w[i]];
  }
  return s;
}

Word Alphabet::parse(std::string_view s) const {
  Word w;
  size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  skip();
  if (i < s.size() && s.substr(i) == "1") return w;
  while (i < s.size()) {
    size_t j = i;
    if (single_char_) {
      j = i + 1;
    } else {
      while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    }
    std::string_view tok = s.substr(i, j - i);
    if (tok != "1") {
      int x = find(tok);
      if (x < 0) throw Error(Errc::parse_error, "unknown letter '" + std::string(tok) + "'");
      w.push_back(static_cast<Letter>(x));
    }
    i = j;
    skip();
  }
  return w;
}

AlphabetPtr make_alphabet(std::vector<std::string> tokens,
                          const std::vector<std::pair<std::string, std::string>>& pairs) {
  return std::make_shared<const Alphabet>(std::move(tokens), pairs);
}

bool shortlex_less(const Word& u, const Word& v) {
  if (u.size() != v.size()) return u.size() < v.size();
  return u < v;
}

Word concat(const Word& u, const Word& v) {
  Word r;
  r.reserve(u.size() + v.size());
  r.insert(r.end(), u.begin(), u.end());
  r.insert(r.end(), v.begin(), v.end());
  return r;
}

}  // namespace hypslp
