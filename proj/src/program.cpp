#include "hypslp/program.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "hypslp/errors.hpp"
#include "text_util.hpp"

namespace hypslp {

const char* kind_name(ProgramKind k) {
  switch (k) {
    case ProgramKind::plain: return "plain";
    case ProgramKind::cut: return "cut";
    case ProgramKind::tethered: return "tethered";
    case ProgramKind::tether_cut: return "tether-cut";
  }
  return "?";
}

namespace {

template <class F>
void for_each_sym(const Rhs& r, F&& f) {
  if (auto* c = std::get_if<ConcatRule>(&r)) {
    for (const Sym& s : c->items) f(s);
  } else if (auto* x = std::get_if<CutRule>(&r)) {
    f(x->x);
  } else if (auto* t = std::get_if<TetherRule>(&r)) {
    f(t->x);
  }
}

template <class F>
void map_syms(Rhs& r, F&& f) {
  if (auto* c = std::get_if<ConcatRule>(&r)) {
    for (Sym& s : c->items) s = f(s);
  } else if (auto* x = std::get_if<CutRule>(&r)) {
    x->x = f(x->x);
  } else if (auto* t = std::get_if<TetherRule>(&r)) {
    t->x = f(t->x);
  }
}

uint64_t bit_length(uint64_t x) {
  uint64_t n = 0;
  while (x) {
    ++n;
    x >>= 1;
  }
  return std::max<uint64_t>(n, 1);
}

}  // namespace

uint32_t ProgramBuilder::add(Rhs r, std::string name) {
  rhs_.push_back(std::move(r));
  names_.push_back(std::move(name));
  return static_cast<uint32_t>(rhs_.size() - 1);
}

Program ProgramBuilder::finish(uint32_t start) const {
  const size_t n = rhs_.size();
  if (start >= n) fail(Errc::invalid_program, "start variable undefined");
  const size_t sigma = alpha_->size();
  auto check_word = [&](const Word& w) {
    for (Letter a : w)
      if (a >= sigma) fail(Errc::alphabet_mismatch, "letter outside the alphabet");
  };
  for (const Rhs& r : rhs_) {
    for_each_sym(r, [&](const Sym& s) {
      if (s.var ? s.id >= n : s.id >= sigma) fail(Errc::invalid_program, "dangling symbol in right-hand side");
    });
    if (auto* t = std::get_if<TerminalRule>(&r)) check_word(t->w);
    if (auto* t = std::get_if<TetherRule>(&r)) {
      check_word(t->a);
      check_word(t->b);
    }
    if (auto* c = std::get_if<CutRule>(&r))
      if (c->j && *c->j < c->i) fail(Errc::invalid_program, "cut with i > j");
  }

  // Iterative DFS producing a post-order; grey nodes on the stack detect cycles.
  std::vector<uint8_t> color(n, 0);
  std::vector<uint32_t> order;
  std::vector<std::pair<uint32_t, size_t>> stack{{start, 0}};
  color[start] = 1;
  auto children = [&](uint32_t v) {
    std::vector<uint32_t> out;
    for_each_sym(rhs_[v], [&](const Sym& s) {
      if (s.var) out.push_back(s.id);
    });
    return out;
  };
  std::vector<std::vector<uint32_t>> kids(n);
  kids[start] = children(start);
  while (!stack.empty()) {
    auto& [v, i] = stack.back();
    if (i < kids[v].size()) {
      uint32_t c = kids[v][i++];
      if (color[c] == 1) fail(Errc::invalid_program, "cyclic production through '" + names_[c] + "'");
      if (color[c] == 0) {
        color[c] = 1;
        kids[c] = children(c);
        stack.push_back({c, 0});
      }
    } else {
      color[v] = 2;
      order.push_back(v);
      kids[v].clear();
      kids[v].shrink_to_fit();
      stack.pop_back();
    }
  }

  std::vector<uint32_t> remap(n, UINT32_MAX);
  for (size_t k = 0; k < order.size(); ++k) remap[order[k]] = static_cast<uint32_t>(k);
  Program p;
  p.alpha_ = alpha_;
  p.start_ = remap[start];
  bool cuts = false, tethers = false;
  std::set<std::string> used;
  for (uint32_t old : order)
    if (!names_[old].empty()) used.insert(names_[old]);
  for (uint32_t old : order) {
    Rhs r = rhs_[old];
    map_syms(r, [&](const Sym& s) { return s.var ? Sym::variable(remap[s.id]) : s; });
    cuts |= std::holds_alternative<CutRule>(r);
    tethers |= std::holds_alternative<TetherRule>(r);
    p.rhs_.push_back(std::move(r));
    std::string nm = names_[old];
    if (nm.empty()) {
      uint32_t k = remap[old];
      nm = "X" + std::to_string(k);
      while (used.count(nm)) nm += "_";
      used.insert(nm);
    }
    p.names_.push_back(std::move(nm));
  }
  p.kind_ = cuts ? (tethers ? ProgramKind::tether_cut : ProgramKind::cut)
                 : (tethers ? ProgramKind::tethered : ProgramKind::plain);
  return p;
}

Program trivial_program(AlphabetPtr alpha) { return word_program(std::move(alpha), {}); }

Program word_program(AlphabetPtr alpha, const Word& w) {
  ProgramBuilder b(alpha);
  return b.finish(b.terminal(w));
}

uint32_t embed(ProgramBuilder& b, const Program& p) {
  if (!(*b.alphabet() == *p.alphabet())) fail(Errc::alphabet_mismatch, "programs over different alphabets");
  const uint32_t base = static_cast<uint32_t>(b.size());
  for (uint32_t v = 0; v < p.size(); ++v) {
    Rhs r = p.rhs(v);
    map_syms(r, [&](const Sym& s) { return s.var ? Sym::variable(s.id + base) : s; });
    b.add(std::move(r));
  }
  return base + p.start();
}

ProgramMetrics metrics(const Program& p) {
  ProgramMetrics m;
  const size_t n = p.size();
  m.height.assign(n, 0);
  m.tether_height.assign(n, 0);
  m.tether_depth.assign(n, 0);
  const uint64_t bps = bit_length(n + p.alphabet()->size() + 1);
  for (uint32_t v = 0; v < n; ++v) {
    const Rhs& r = p.rhs(v);
    uint32_t h = 0, th = 0;
    for_each_sym(r, [&](const Sym& s) {
      h = std::max(h, (s.var ? m.height[s.id] : 0) + 1);
      if (s.var) th = std::max(th, m.tether_height[s.id]);
    });
    if (auto* t = std::get_if<TerminalRule>(&r)) {
      h = t->w.empty() ? 0 : 1;
      m.size += bps * std::max<uint64_t>(t->w.size(), 1);
    } else if (auto* c = std::get_if<ConcatRule>(&r)) {
      m.size += bps * std::max<uint64_t>(c->items.size(), 1);
    } else if (auto* c = std::get_if<CutRule>(&r)) {
      m.size += bps + bit_length(c->i) + (c->j ? bit_length(*c->j) : 0);
    } else if (auto* t = std::get_if<TetherRule>(&r)) {
      th += 1;
      m.size += bps * (1 + t->a.size() + t->b.size());
    }
    m.height[v] = h;
    m.tether_height[v] = th;
  }
  const uint32_t top = m.tether_height[p.start()];
  for (uint32_t v = 0; v < n; ++v) m.tether_depth[v] = top - std::min(top, m.tether_height[v]) + 1;
  return m;
}

// ---- text format ---------------------------------------------------------

namespace {

bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }

struct RhsParser {
  const std::string& s;
  size_t i = 0;
  const Alphabet& alpha;
  ProgramBuilder& b;
  std::map<std::string, uint32_t>& vars;
  std::vector<bool>& defined;
  long line;

  [[noreturn]] void error(const std::string& what) const {
    fail(Errc::parse_error, "line " + std::to_string(line) + ": " + what);
  }
  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  std::string until(char close) {
    size_t e = s.find(close, i);
    if (e == std::string::npos) error(std::string("missing '") + close + "'");
    std::string out = s.substr(i, e - i);
    i = e + 1;
    return out;
  }
  uint32_t var(const std::string& name) {
    auto it = vars.find(name);
    if (it != vars.end()) return it->second;
    uint32_t v = b.add(TerminalRule{}, name);
    vars.emplace(name, v);
    defined.push_back(false);
    return v;
  }
  Word word(std::string text) {
    try {
      return alpha.parse(text);
    } catch (const Error& e) {
      error(e.what());
    }
  }

  // Returns the items and the last operator applied to a single item, if any.
  std::vector<Sym> parse(std::optional<Rhs>& single_op) {
    std::vector<Sym> items;
    size_t ops_on_last = 0;
    std::optional<Rhs> last_op;
    skip();
    while (i < s.size()) {
      Sym cur;
      std::vector<Sym> expanded;
      if (s[i] == '\'') {
        ++i;
        Word w = word(until('\''));
        for (Letter a : w) expanded.push_back(Sym::letter(a));
      } else if (s[i] == '1' && (i + 1 == s.size() || !is_name_char(s[i + 1]))) {
        ++i;
      } else if (is_name_char(s[i])) {
        size_t j = i;
        while (j < s.size() && is_name_char(s[j])) ++j;
        expanded.push_back(Sym::variable(var(s.substr(i, j - i))));
        i = j;
      } else {
        error(std::string("unexpected character '") + s[i] + "'");
      }
      ops_on_last = 0;
      last_op.reset();
      while (i < s.size() && (s[i] == '[' || s[i] == '<')) {
        if (expanded.size() != 1) {
          uint32_t t = b.add(TerminalRule{});
          Word w;
          for (const Sym& x : expanded) w.push_back(static_cast<Letter>(x.id));
          b.set(t, TerminalRule{w});
          defined.push_back(true);
          expanded = {Sym::variable(t)};
        }
        Rhs op;
        if (s[i] == '[') {
          ++i;
          std::string body = until(']');
          size_t colon = body.find(':');
          if (colon == std::string::npos) error("cut needs ':'");
          auto trim = [](std::string x) {
            x.erase(0, x.find_first_not_of(" \t"));
            x.erase(x.find_last_not_of(" \t") + 1);
            return x;
          };
          std::string a = trim(body.substr(0, colon)), c = trim(body.substr(colon + 1));
          CutRule cr{expanded[0], a.empty() ? 0 : parse_uint(a, line), std::nullopt};
          if (!c.empty()) cr.j = parse_uint(c, line);
          op = cr;
        } else {
          ++i;
          std::string body = until('>');
          size_t comma = body.find(',');
          if (comma == std::string::npos) error("tether needs ','");
          op = TetherRule{expanded[0], word(body.substr(0, comma)), word(body.substr(comma + 1))};
        }
        if (last_op) {
          uint32_t t = b.add(*last_op);
          defined.push_back(true);
          std::visit(
              [&](auto& r) {
                if constexpr (requires { r.x; }) r.x = Sym::variable(t);
              },
              op);
        }
        last_op = op;
        ++ops_on_last;
      }
      if (last_op) {
        if (items.empty()) {
          skip();
          if (i == s.size()) {
            single_op = last_op;
            return items;
          }
        }
        uint32_t t = b.add(*last_op);
        defined.push_back(true);
        expanded = {Sym::variable(t)};
      }
      items.insert(items.end(), expanded.begin(), expanded.end());
      skip();
    }
    return items;
  }
};

}  // namespace

Program parse_program(std::istream& in) {
  LineReader rd(in);
  std::string line;
  if (!rd.next_raw(line) || line != "slp v1") fail(Errc::parse_error, "expected header 'slp v1'");
  std::vector<std::string> letters;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string start_name;
  std::vector<std::pair<long, std::string>> prods;
  while (rd.next_raw(line)) {
    std::istringstream is(line);
    std::string head;
    is >> head;
    if (head == "end") break;
    if (head == "alphabet") {
      std::string t;
      while (is >> t) letters.push_back(t);
    } else if (head == "pair") {
      std::string x, y, extra;
      if (!(is >> x >> y) || (is >> extra)) fail(Errc::parse_error, rd.where() + "pair needs two letters");
      pairs.emplace_back(x, y);
    } else if (head == "start") {
      if (!(is >> start_name)) fail(Errc::parse_error, rd.where() + "start needs a variable");
    } else if (line.find('=') != std::string::npos) {
      prods.emplace_back(rd.line(), line);
    } else {
      fail(Errc::parse_error, rd.where() + "unrecognised line");
    }
  }
  if (letters.empty()) fail(Errc::parse_error, "missing alphabet line");
  AlphabetPtr alpha = make_alphabet(letters, pairs);
  ProgramBuilder b(alpha);
  std::map<std::string, uint32_t> vars;
  std::vector<bool> defined;
  for (const auto& [ln, text] : prods) {
    size_t eq = text.find('=');
    std::string lhs = text.substr(0, eq);
    lhs.erase(lhs.find_last_not_of(" \t") + 1);
    if (lhs.empty() || !std::all_of(lhs.begin(), lhs.end(), is_name_char) || lhs == "1")
      fail(Errc::parse_error, "line " + std::to_string(ln) + ": bad variable name '" + lhs + "'");
    std::string body = text.substr(eq + 1);
    RhsParser rp{body, 0, *alpha, b, vars, defined, ln};
    uint32_t v = rp.var(lhs);
    if (defined[v]) fail(Errc::parse_error, "line " + std::to_string(ln) + ": variable '" + lhs + "' defined twice");
    std::optional<Rhs> op;
    std::vector<Sym> items = rp.parse(op);
    if (op) {
      b.set(v, *op);
    } else if (std::all_of(items.begin(), items.end(), [](const Sym& s) { return !s.var; })) {
      Word w;
      for (const Sym& s : items) w.push_back(static_cast<Letter>(s.id));
      b.set(v, TerminalRule{w});
    } else {
      b.set(v, ConcatRule{items});
    }
    defined[v] = true;
  }
  for (const auto& [nm, v] : vars)
    if (!defined[v]) fail(Errc::parse_error, "variable '" + nm + "' used but never defined");
  if (start_name.empty()) {
    if (prods.empty()) fail(Errc::parse_error, "no productions");
    fail(Errc::parse_error, "missing start line");
  }
  auto it = vars.find(start_name);
  if (it == vars.end()) fail(Errc::parse_error, "start variable '" + start_name + "' undefined");
  try {
    return b.finish(it->second);
  } catch (const Error& e) {
    if (e.code() == Errc::invalid_program) fail(Errc::parse_error, e.what());
    throw;
  }
}

Program parse_program_string(const std::string& text) {
  std::istringstream is(text);
  return parse_program(is);
}

Program load_program(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, "cannot open '" + path + "'");
  return parse_program(in);
}

namespace {

std::string quote(const Alphabet& alpha, const Word& w) {
  if (alpha.single_char()) return "'" + alpha.format(w) + "'";
  std::string s;
  for (size_t k = 0; k < w.size(); ++k) s += (k ? " '" : "'") + alpha.token(w[k]) + "'";
  return s;
}

}  // namespace

std::string format_program(const Program& p) {
  const Alphabet& alpha = *p.alphabet();
  std::ostringstream os;
  os << "slp v1\nalphabet";
  for (const auto& t : alpha.tokens()) os << ' ' << t;
  os << '\n';
  for (size_t x = 0; x < alpha.size(); ++x) {
    Letter y = alpha.inverse(static_cast<Letter>(x));
    if (y >= x) os << "pair " << alpha.token(static_cast<Letter>(x)) << ' ' << alpha.token(y) << '\n';
  }
  os << "start " << p.name(p.start()) << '\n';
  auto sym = [&](const Sym& s) { return s.var ? p.name(s.id) : quote(alpha, {static_cast<Letter>(s.id)}); };
  for (uint32_t v = 0; v < p.size(); ++v) {
    os << p.name(v) << " =";
    const Rhs& r = p.rhs(v);
    if (auto* t = std::get_if<TerminalRule>(&r)) {
      os << ' ' << (t->w.empty() ? std::string("1") : quote(alpha, t->w));
    } else if (auto* c = std::get_if<ConcatRule>(&r)) {
      if (c->items.empty()) os << " 1";
      for (const Sym& s : c->items) os << ' ' << sym(s);
    } else if (auto* c = std::get_if<CutRule>(&r)) {
      os << ' ' << sym(c->x) << '[' << c->i << ':';
      if (c->j) os << *c->j;
      os << ']';
    } else if (auto* t = std::get_if<TetherRule>(&r)) {
      os << ' ' << sym(t->x) << '<' << alpha.format(t->a) << ',' << alpha.format(t->b) << '>';
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace hypslp
