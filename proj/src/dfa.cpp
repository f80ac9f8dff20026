#include "hypslp/dfa.hpp"

#include <sstream>

#include "hypslp/errors.hpp"
#include "text_util.hpp"

namespace hypslp {

Dfa::Dfa(int n, int sigma_, State init) : states(n), initial(init), sigma(sigma_) {
  delta.assign(static_cast<size_t>(n) * sigma_, 0);
  accepting.assign(n, false);
}

State Dfa::run(State q, const Word& w) const {
  for (Letter a : w) q = step(q, a);
  return q;
}

Dfa parse_dfa(std::istream& in, const Alphabet& alpha) {
  LineReader rd(in);
  std::vector<std::string> tk;
  if (!rd.next(tk) || tk.size() != 2 || tk[0] != "dfa" || tk[1] != "v1")
    fail(Errc::parse_error, "expected header 'dfa v1'");
  int n = -1;
  long init = -1;
  std::vector<long> acc;
  std::vector<std::vector<int>> tr;
  const int sigma = static_cast<int>(alpha.size());
  while (rd.next(tk)) {
    if (tk[0] == "end") break;
    if (tk[0] == "states" && tk.size() == 2) {
      n = static_cast<int>(parse_uint(tk[1], rd.line()));
      if (n <= 0 || n > 65535) fail(Errc::parse_error, rd.where() + "bad state count");
      tr.assign(n, std::vector<int>(sigma, -1));
    } else if (tk[0] == "initial" && tk.size() == 2) {
      init = static_cast<long>(parse_uint(tk[1], rd.line()));
    } else if (tk[0] == "accepting") {
      for (size_t i = 1; i < tk.size(); ++i) acc.push_back(static_cast<long>(parse_uint(tk[i], rd.line())));
    } else if (tk.size() == 4 && tk[2] == "->") {
      if (n < 0) fail(Errc::parse_error, rd.where() + "transition before 'states'");
      long q = static_cast<long>(parse_uint(tk[0], rd.line()));
      long r = static_cast<long>(parse_uint(tk[3], rd.line()));
      int a = alpha.find(tk[1]);
      if (a < 0) fail(Errc::parse_error, rd.where() + "unknown letter '" + tk[1] + "'");
      if (q >= n || r >= n) fail(Errc::parse_error, rd.where() + "state out of range");
      if (tr[q][a] >= 0 && tr[q][a] != r) fail(Errc::parse_error, rd.where() + "nondeterministic transition");
      tr[q][a] = static_cast<int>(r);
    } else {
      fail(Errc::parse_error, rd.where() + "unrecognised line");
    }
  }
  if (n < 0 || init < 0 || init >= n) fail(Errc::parse_error, "dfa lacks states or initial state");
  Dfa m(n, sigma, static_cast<State>(init));
  for (long q : acc) {
    if (q >= n) fail(Errc::parse_error, "accepting state out of range");
    m.accepting[q] = true;
  }
  for (int q = 0; q < n; ++q)
    for (int a = 0; a < sigma; ++a) {
      if (tr[q][a] < 0)
        fail(Errc::parse_error, "missing transition " + std::to_string(q) + " " + alpha.token(a));
      m.set(static_cast<State>(q), static_cast<Letter>(a), static_cast<State>(tr[q][a]));
    }
  return m;
}

std::string format_dfa(const Dfa& m, const Alphabet& alpha) {
  std::ostringstream os;
  os << "dfa v1\nstates " << m.states << "\ninitial " << m.initial << "\naccepting";
  for (int q = 0; q < m.states; ++q)
    if (m.accepting[q]) os << ' ' << q;
  os << '\n';
  for (int q = 0; q < m.states; ++q)
    for (int a = 0; a < m.sigma; ++a)
      os << q << ' ' << alpha.token(static_cast<Letter>(a)) << " -> " << m.step(static_cast<State>(q), static_cast<Letter>(a)) << '\n';
  return os.str();
}

}  // namespace hypslp
