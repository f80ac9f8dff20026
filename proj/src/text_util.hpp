#pragma once

#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "hypslp/errors.hpp"

namespace hypslp {

// Reads non-blank lines with '#' comments removed.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next_raw(std::string& out) {
    std::string s;
    while (std::getline(in_, s)) {
      ++line_;
      if (auto h = s.find('#'); h != std::string::npos) s.erase(h);
      size_t b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      size_t e = s.find_last_not_of(" \t\r");
      out = s.substr(b, e - b + 1);
      return true;
    }
    return false;
  }

  bool next(std::vector<std::string>& tokens) {
    std::string s;
    if (!next_raw(s)) return false;
    tokens.clear();
    std::istringstream is(s);
    std::string t;
    while (is >> t) tokens.push_back(t);
    return true;
  }

  long line() const { return line_; }
  std::string where() const { return "line " + std::to_string(line_) + ": "; }

 private:
  std::istream& in_;
  long line_ = 0;
};

inline uint64_t parse_uint(const std::string& s, long line) {
  if (s.empty() || s.size() > 20 || s.find_first_not_of("0123456789") != std::string::npos)
    fail(Errc::parse_error, "line " + std::to_string(line) + ": expected a natural number, got '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    fail(Errc::parse_error, "line " + std::to_string(line) + ": number out of range '" + s + "'");
  }
}

}  // namespace hypslp
