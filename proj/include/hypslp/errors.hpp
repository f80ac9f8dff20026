#pragma once

#include <stdexcept>
#include <string>

namespace hypslp {

enum class Errc {
  parse_error,
  length_exceeded,
  missing_oracle,
  kind_unsupported,
  index_out_of_range,
  alphabet_mismatch,
  not_geodesic,
  oracle_ball_too_small,
  assertion_failure,
  search_budget_exceeded,
  not_generating,
  consistency_error,
  cap_exceeded,
  invalid_program,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc c, const std::string& what)
      : std::runtime_error(std::string(errc_name(c)) + ": " + what), code_(c) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc c, const std::string& what) { throw Error(c, what); }

}  // namespace hypslp
