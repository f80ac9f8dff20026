// hypslp: command-line front end.
//
// Exit codes: 0 yes/success, 1 no/absent, 2 usage or input error,
// 3 unknown within the knapsack bound.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hypslp/conjugacy.hpp"
#include "hypslp/errors.hpp"
#include "hypslp/knapsack.hpp"
#include "hypslp/reference.hpp"
#include "hypslp/shortlex.hpp"
#include "hypslp/slp.hpp"
#include "json.hpp"

using namespace hypslp;
using json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string group_file;
  std::string out;
  std::string report = "text";
  uint64_t max_len = uint64_t{1} << 24;
  uint64_t bound = 0;
  uint64_t nmax = uint64_t{1} << 16;
  uint64_t seed = 1;
  unsigned threads = 1;
  std::vector<std::string> files;
  std::vector<std::string> from, to;
  std::string expression;
  std::string solution;
};

class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    uint64_t h = 14695981039346656037ull;
    char c;
    while (in.get(c)) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    inputs_[path] = buf;
  }
  template <class F>
  auto time(const std::string& phase, F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    auto finish = [&] {
      timings_[phase] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      finish();
    } else {
      auto r = f();
      finish();
      return r;
    }
  }
  json& result() { return result_; }
  void audit(const AuditTrail& a) {
    for (const auto& [k, v] : a) audit_[k] = v;
  }
  void audit(const std::string& k, const std::string& v) { audit_[k] = v; }

  json to_json() const {
    json j;
    j["report"] = 1;
    j["command"] = command_;
    j["inputs"] = inputs_;
    j["result"] = result_;
    j["timings"] = timings_;
    json a = audit_;
    const AuditCounts c = audit_counts();
    a["length_checks"] = c.length_checks;
    a["searches"] = c.searches;
    a["invariant_failures"] = c.failures();
    j["audit"] = a;
    return j;
  }

 private:
  std::string command_;
  json inputs_ = json::object(), result_ = json::object(), timings_ = json::object(), audit_ = json::object();
};

// Writes text to -o FILE or stdout.
void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) fail(Errc::parse_error, "cannot write '" + o.out + "'");
  f << text;
}

std::string word_text(const Alphabet& a, const Word& w) { return a.format(w); }

// Short results are shown as words, everything else as a program.
json program_json(const Program& p, const GroupOracle& g) {
  json j;
  Store st(*g.alphabet());
  Shortlex sl(st, g);
  Ref r = eval_to_store(sl, p);
  j["length"] = st.length(r);
  if (st.length(r) <= 256) j["word"] = word_text(*g.alphabet(), st.expand(r));
  j["program"] = format_program(p);
  return j;
}

GroupPtr need_group(const Options& o, Report& rep) {
  if (o.group_file.empty()) fail(Errc::parse_error, "-g GROUPFILE is required for this command");
  rep.input(o.group_file);
  return load_group(o.group_file);
}

Program load_input(const std::string& path, Report& rep, const GroupPtr& g = nullptr) {
  rep.input(path);
  Program p = load_program(path);
  if (g && !(*p.alphabet() == *g->alphabet())) fail(Errc::alphabet_mismatch, "'" + path + "' is not over the group's alphabet");
  return p;
}

int finish(const Options& o, Report& rep, int code, const std::string& text) {
  if (o.report == "json") {
    rep.result()["exit"] = code;
    std::cout << rep.to_json().dump(2) << '\n';
    if (!o.out.empty() && !text.empty()) emit(o, text);
  } else {
    emit(o, text);
  }
  return code;
}

std::string tuple_text(const std::vector<uint64_t>& n) {
  std::string s = "(";
  for (size_t i = 0; i < n.size(); ++i) s += (i ? "," : "") + std::to_string(n[i]);
  return s + ")";
}

std::vector<uint64_t> parse_tuple(std::string s) {
  if (std::filesystem::exists(s)) {
    std::ifstream in(s);
    std::getline(in, s);
  }
  std::vector<uint64_t> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == '(' || c == ')' || c == ' ') continue;
    if (c == ',') {
      if (!cur.empty()) {
        size_t used = 0;
        unsigned long long v = 0;
        try {
          v = std::stoull(cur, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != cur.size() || cur[0] == '-') fail(Errc::parse_error, "bad exponent '" + cur + "'");
        out.push_back(v);
      }
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

int cmd_eval(const Options& o) {
  Report rep("eval");
  Program p = load_input(o.files.at(0), rep);
  GroupPtr g = o.group_file.empty() ? nullptr : need_group(o, rep);
  if (p.has_tethers() && !g) fail(Errc::missing_oracle, "tethered programs need -g");
  Word w = rep.time("eval", [&] { return eval(p, g.get(), o.max_len); });
  rep.result()["length"] = w.size();
  rep.result()["word"] = word_text(*p.alphabet(), w);
  return finish(o, rep, 0, word_text(*p.alphabet(), w) + "\n");
}

int cmd_stats(const Options& o) {
  Report rep("stats");
  Program p = load_input(o.files.at(0), rep);
  GroupPtr g = o.group_file.empty() ? nullptr : need_group(o, rep);
  ProgramMetrics m = metrics(p);
  json& r = rep.result();
  r["kind"] = kind_name(p.kind());
  r["variables"] = p.size();
  r["size_bits"] = m.size;
  r["height"] = m.height[p.start()];
  r["tether_height"] = m.tether_height[p.start()];
  if (!p.has_tethers())
    r["length"] = length(p);
  else if (g)
    r["length"] = lengths_of_tethered(p, *g)[p.start()];
  std::ostringstream os;
  for (auto it = r.begin(); it != r.end(); ++it) os << it.key() << ' ' << (it->is_string() ? it->get<std::string>() : it->dump()) << '\n';
  return finish(o, rep, 0, os.str());
}

int cmd_reduce(const Options& o) {
  Report rep("reduce");
  GroupPtr g = need_group(o, rep);
  Program p = load_input(o.files.at(0), rep, g);
  Program q = rep.time("reduce", [&] { return slp_to_shortlex(p, *g); });
  rep.result()["length"] = length(q);
  rep.result()["program"] = format_program(q);
  return finish(o, rep, 0, format_program(q));
}

int cmd_wp(const Options& o) {
  Report rep("wp");
  GroupPtr g = need_group(o, rep);
  Program p = load_input(o.files.at(0), rep, g);
  bool id = rep.time("wp", [&] { return is_identity(p, *g); });
  rep.result()["identity"] = id;
  return finish(o, rep, id ? 0 : 1, id ? "identity\n" : "not identity\n");
}

int cmd_order(const Options& o) {
  Report rep("order");
  GroupPtr g = need_group(o, rep);
  Program p = load_input(o.files.at(0), rep, g);
  auto n = rep.time("order", [&] { return order(p, *g); });
  if (n)
    rep.result()["order"] = *n;
  else
    rep.result()["order"] = "infinite";
  return finish(o, rep, 0, (n ? std::to_string(*n) : "infinite") + "\n");
}

int cmd_conj(const Options& o) {
  Report rep("conj");
  GroupPtr g = need_group(o, rep);
  if (o.files.size() != 2) fail(Errc::parse_error, "conj needs two program files");
  Program u = load_input(o.files[0], rep, g), v = load_input(o.files[1], rep, g);
  ConjugacyResult r = rep.time("conjugacy", [&] { return conjugacy(u, v, *g, {o.nmax}); });
  rep.audit(r.audit);
  rep.result()["conjugate"] = r.witness.has_value();
  if (!r.witness) return finish(o, rep, 1, "not conjugate\n");
  rep.result()["witness"] = program_json(*r.witness, *g);
  return finish(o, rep, 0, "# g with g^-1 u g = v\n" + format_program(*r.witness));
}

int cmd_simconj(const Options& o) {
  Report rep("simconj");
  GroupPtr g = need_group(o, rep);
  if (o.from.size() != o.to.size()) fail(Errc::parse_error, "--from and --to need the same number of files");
  std::vector<Program> us, vs;
  for (const auto& f : o.from) us.push_back(load_input(f, rep, g));
  for (const auto& f : o.to) vs.push_back(load_input(f, rep, g));
  ConjugacyResult r = rep.time("simultaneous", [&] { return simultaneous_conjugacy(us, vs, *g, {o.nmax}); });
  rep.audit(r.audit);
  rep.result()["conjugate"] = r.witness.has_value();
  if (!r.witness) return finish(o, rep, 1, "not simultaneously conjugate\n");
  rep.result()["witness"] = program_json(*r.witness, *g);
  return finish(o, rep, 0, "# g with g^-1 u_i g = v_i\n" + format_program(*r.witness));
}

int cmd_centralizer(const Options& o) {
  Report rep("centralizer");
  GroupPtr g = need_group(o, rep);
  std::vector<Program> us;
  for (const auto& f : o.files) us.push_back(load_input(f, rep, g));
  CentralizerResult r = rep.time("centralizer", [&] { return centralizer(us, *g, {o.nmax}); });
  rep.audit(r.audit);
  json gens = json::array();
  std::ostringstream os;
  for (size_t i = 0; i < r.generators.size(); ++i) {
    gens.push_back(program_json(r.generators[i], *g));
    if (gens.back().contains("word"))
      os << gens.back()["word"].get<std::string>() << '\n';
    else
      os << "# generator " << i + 1 << '\n' << format_program(r.generators[i]);
  }
  rep.result()["generators"] = gens;
  return finish(o, rep, 0, os.str());
}

int cmd_knapsack(const Options& o) {
  Report rep("knapsack");
  GroupPtr g = need_group(o, rep);
  rep.input(o.files.at(0));
  KnapsackExpression e = load_knapsack(o.files[0]);
  if (!(*e.target.alphabet() == *g->alphabet())) fail(Errc::alphabet_mismatch, "knapsack programs are not over the group's alphabet");
  KnapsackOutcome r = rep.time("solve", [&] { return solve(e, *g, {o.bound}); });
  rep.audit("path", r.path);
  json& j = rep.result();
  if (r.status == KnapsackOutcome::solved) {
    j["status"] = "solved";
    j["exponents"] = r.solution->exponents;
    return finish(o, rep, 0, tuple_text(r.solution->exponents) + "\n");
  }
  if (r.status == KnapsackOutcome::no_solution) {
    j["status"] = "no_solution";
    return finish(o, rep, 1, "no solution\n");
  }
  j["status"] = "unknown";
  j["bound"] = r.bound;
  j["bound_source"] = o.bound ? "user" : "heuristic default";
  return finish(o, rep, 3,
                "unknown: no solution with exponents <= " + std::to_string(r.bound) +
                    (o.bound ? "" : " (heuristic default bound)") + "\n");
}

int cmd_verify_knapsack(const Options& o) {
  Report rep("verify-knapsack");
  GroupPtr g = need_group(o, rep);
  rep.input(o.expression);
  KnapsackExpression e = load_knapsack(o.expression);
  KnapsackSolution s{parse_tuple(o.solution)};
  bool ok = rep.time("verify", [&] { return verify(e, s, *g); });
  rep.result()["valid"] = ok;
  return finish(o, rep, ok ? 0 : 1, ok ? "valid\n" : "invalid\n");
}

// A quick seeded battery against the reference implementations.
int cmd_selftest(const Options& o) {
  Report rep("selftest");
  Corpus c(o.seed, CorpusParams{8, 3, 4, 4000, 0.35});
  uint64_t cases = 0, bad = 0;
  auto check = [&](bool ok) {
    ++cases;
    if (!ok) ++bad;
  };
  std::vector<GroupPtr> groups{free_group(2)};
  for (const auto& n : builtin_group_names()) groups.push_back(builtin_group(n));
  rep.time("shortlex", [&] {
    for (const auto& g : groups)
      for (int k = 0; k < 40; ++k) {
        Program p = c.program(g->alphabet());
        check(eval(slp_to_shortlex(p, *g)) == naive_slex(eval(p), *g, 1 << 20));
      }
  });
  rep.time("conjugacy", [&] {
    for (const auto& g : groups)
      for (int k = 0; k < 40; ++k) {
        Word u = c.word(g->alphabet(), c.uniform(0, 6)), v = c.word(g->alphabet(), c.uniform(0, 6));
        auto got = conjugate_words(u, v, *g);
        check(got.has_value() == naive_conjugate(u, v, *g).has_value());
      }
  });
  rep.time("knapsack", [&] {
    GroupPtr z = free_group(1);
    for (int k = 0; k < 60; ++k) {
      std::vector<int64_t> a{static_cast<int64_t>(c.uniform(0, 10)) - 5, static_cast<int64_t>(c.uniform(1, 6))};
      int64_t t = static_cast<int64_t>(c.uniform(0, 40)) - 20;
      auto got = solve_linear(a, t);
      int64_t s = 0;
      if (got) s = a[0] * static_cast<int64_t>((*got)[0]) + a[1] * static_cast<int64_t>((*got)[1]);
      check(!got || s == t);
    }
  });
  rep.result()["cases"] = cases;
  rep.result()["failures"] = bad;
  rep.result()["seed"] = o.seed;
  const bool ok = bad == 0 && audit_counts().failures() == 0;
  std::ostringstream os;
  os << "selftest seed " << o.seed << ": " << cases - bad << "/" << cases << " cases agree, "
     << audit_counts().failures() << " invariant failures\n";
  return finish(o, rep, ok ? 0 : 1, os.str());
}

int cmd_bench(const Options& o) {
  Report rep("bench");
  GroupPtr f2 = free_group(2);
  json rows = json::array();
  std::ostringstream os;
  os << "n  log2_len  seconds  identity\n";
  for (unsigned n = 10; n <= 60; n += 10) {
    Program p = concat(example_family(n), invert(example_family(n)));
    auto t0 = std::chrono::steady_clock::now();
    Program q = slp_to_shortlex(p, *f2);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool id = length(q) == 0;
    rows.push_back({{"n", n}, {"log2_length", n + 2}, {"seconds", s}, {"identity", id}});
    char buf[96];
    std::snprintf(buf, sizeof buf, "%-2u %-9u %-8.3f %s\n", n, n + 2, s, id ? "yes" : "no");
    os << buf;
  }
  rep.result()["family"] = "concat(G_n, invert(G_n)) over F2";
  rep.result()["rows"] = rows;
  rep.result()["seed"] = o.seed;
  return finish(o, rep, 0, os.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressed word algorithms for hyperbolic groups"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* s, bool group) {
    s->add_option("-g,--group", o.group_file, group ? "group file (required)" : "group file")->check(CLI::ExistingFile);
    s->add_option("-o,--output", o.out, "write the result here instead of stdout");
    s->add_option("--report", o.report, "text or json")->check(CLI::IsMember({"text", "json"}));
    s->add_option("--threads", o.threads, "worker threads (the library runs single-threaded)");
  };
  auto files = [&](CLI::App* s, size_t min, size_t max) {
    auto* opt = s->add_option("files", o.files, "program files")->check(CLI::ExistingFile)->required(min > 0);
    opt->expected(static_cast<int>(min), static_cast<int>(max));
  };

  std::map<std::string, int (*)(const Options&)> run;
  auto sub = [&](const char* name, const char* help, int (*fn)(const Options&), bool group) {
    CLI::App* s = app.add_subcommand(name, help);
    common(s, group);
    run[name] = fn;
    return s;
  };

  auto* s_eval = sub("eval", "decompress a program", cmd_eval, false);
  files(s_eval, 1, 1);
  s_eval->add_option("--max-len", o.max_len, "refuse to produce longer words");
  files(sub("stats", "size, height and length of a program", cmd_stats, false), 1, 1);
  files(sub("reduce", "program for the shortlex normal form", cmd_reduce, true), 1, 1);
  files(sub("wp", "word problem: exit 0 iff the program is the identity", cmd_wp, true), 1, 1);
  files(sub("order", "element order, or infinite", cmd_order, true), 1, 1);
  auto* s_conj = sub("conj", "conjugacy of two programs U V", cmd_conj, true);
  files(s_conj, 2, 2);
  auto* s_sim = sub("simconj", "simultaneous conjugacy of --from lists to --to lists", cmd_simconj, true);
  s_sim->add_option("--from", o.from, "u_1 ... u_n")->check(CLI::ExistingFile);
  s_sim->add_option("--to", o.to, "v_1 ... v_n")->check(CLI::ExistingFile);
  auto* s_cent = sub("centralizer", "generators of the common centralizer", cmd_centralizer, true);
  files(s_cent, 0, 1 << 20);
  for (auto* s : {s_conj, s_sim, s_cent}) s->add_option("--nmax", o.nmax, "exponent search cap for infinite backends");
  auto* s_knap = sub("knapsack", "solve a knap v1 expression", cmd_knapsack, true);
  files(s_knap, 1, 1);
  s_knap->add_option("--bound", o.bound, "exponent bound where no exact method exists");
  auto* s_vk = sub("verify-knapsack", "check an exponent tuple such as (2,1)", cmd_verify_knapsack, true);
  s_vk->add_option("expression", o.expression, "knap v1 file")->check(CLI::ExistingFile)->required();
  s_vk->add_option("solution", o.solution, "tuple or file holding it")->required();
  for (auto* s : {sub("selftest", "seeded checks against the reference implementations", cmd_selftest, false),
                  sub("bench", "timing of the shortlex reduction on the doubling family", cmd_bench, false)})
    s->add_option("--seed", o.seed, "corpus seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    for (auto* s : app.get_subcommands()) return run.at(s->get_name())(o);
  } catch (const Error& e) {
    std::cerr << "hypslp: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hypslp: error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
