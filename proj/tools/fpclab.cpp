// fpclab: command-line front end to the lambda engine and the generator lab.
//
// Exit codes: 0 success / verified / evidence, 1 definitive refutation,
// 2 unknown within bounds, 3 usage error.

#include <cstdio>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fpclab/boehm.hpp"
#include "fpclab/combinators.hpp"
#include "fpclab/fpc.hpp"
#include "fpclab/generators.hpp"
#include "fpclab/lab.hpp"
#include "fpclab/reduction.hpp"
#include "fpclab/term.hpp"

namespace {

using namespace fpclab;

enum Exit { kOk = 0, kRefuted = 1, kUnknown = 2, kUsage = 3 };

struct Globals {
  std::size_t fuel = 500;
  std::size_t max_nodes = 20000;
  std::size_t max_size = 4000;
  bool json = false;

  Bounds bounds() const { return Bounds{fuel, max_nodes, max_size}; }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& arg) {
  if (!arg.empty() && arg != "-") return arg;
  std::string text((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw UsageError("no term given");
  return text;
}

Term read_term(const std::string& arg) {
  try {
    return parse_with_library(read_input(arg));
  } catch (const ParseError& e) {
    throw UsageError("parse error at " + std::to_string(e.position()) + ": " + e.what());
  }
}

Generator read_generator(const std::string& arg) {
  try {
    return parse_generator(read_input(arg));
  } catch (const ParseError& e) {
    throw UsageError("generator parse error at " + std::to_string(e.position()) + ": " + e.what());
  }
}

void emit(const Globals& g, const json& j, const std::string& text) {
  if (g.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
  }
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Verified:
      return kOk;
    case Verdict::Refuted:
      return kRefuted;
    case Verdict::Unknown:
      return kUnknown;
  }
  return kUnknown;
}

std::string status_line(const ProbeStatus& s) {
  std::string out = to_string(s.kind);
  if (s.k) out += " k=" + std::to_string(*s.k);
  if (s.witness) out += " witness=" + print(*s.witness);
  return out;
}

int cmd_term(const Globals& g, const std::string& name) {
  Term t = named(name);
  emit(g, json{{"name", name}, {"term", print(t)}}, print(t));
  return kOk;
}

int cmd_parse(const Globals& g, const std::string& input) {
  Term t = read_term(input);
  json j{{"term", print(t)}, {"size", t.size()}, {"free_vars", free_vars(t)}, {"closed", t.closed()}};
  emit(g, j, print(t));
  return kOk;
}

int cmd_reduce(const Globals& g, const std::string& input, const std::string& strategy, std::size_t steps) {
  Term t = read_term(input);
  std::vector<RedexPosition> path;
  bool done = false;
  for (std::size_t i = 0;; ++i) {
    std::optional<RedexPosition> p;
    if (strategy == "head") {
      p = head_redex(t);
    } else if (auto n = normal_step(t)) {
      p = n->first;
    }
    if (!p) {
      done = true;
      break;
    }
    if (i >= steps) break;
    Term next = step(t, *p);
    if (next.size() > g.max_size) break;
    t = std::move(next);
    path.push_back(*p);
  }
  std::string form = strategy == "head" ? "head normal form" : "normal form";
  json j{{"term", print(t)}, {"steps", path.size()}, {"strategy", strategy}, {"reached", done},
         {"path", path_json(path)}};
  std::string text = print(t) + "\n" + (done ? form + " after " : "stopped after ") + std::to_string(path.size()) +
                     " steps";
  emit(g, j, text);
  return done ? kOk : kUnknown;
}

int cmd_bt(const Globals& g, const std::string& input, std::size_t depth) {
  Term t = read_term(input);
  auto a = approximant(t, depth, g.fuel, g.max_size);
  emit(g, json{{"approximant", render(a)}, {"tree", a}, {"depth", depth}, {"fuel", g.fuel}}, render(a));
  return kOk;
}

int cmd_fpc(const Globals& g, const std::string& input) {
  Term y = read_term(input);
  auto v = is_fpc_bounded(y, g.bounds());
  std::string text = to_string(v.verdict);
  if (v.join && v.join->joined())
    text += "\ncommon reduct: " + print(*v.join->witness) + "\nsteps: " + std::to_string(v.join->left_path.size()) +
            " / " + std::to_string(v.join->right_path.size());
  emit(g, v, text);
  return verdict_exit(v.verdict);
}

int cmd_wfpc(const Globals& g, const std::string& input, std::size_t depth) {
  Term y = read_term(input);
  auto v = is_wfpc_bounded(y, depth, g.fuel);
  emit(g, v, std::string(to_string(v.verdict)) + "\napproximant: " + render(*v.approx));
  return verdict_exit(v.verdict);
}

int cmd_classify(const Globals& g, const std::string& input, std::size_t kmax, std::size_t depth) {
  Generator gen = read_generator(input);
  if (gen.trivial()) throw UsageError("classification needs a non-trivial generator");
  auto r = classify(gen, ProbeConfig{kmax, depth, g.bounds()});
  std::ostringstream text;
  text << "generator: " << to_string(gen) << "\n";
  text << "constant: " << status_line(r.constant) << "\n";
  text << "weakly_constant: " << status_line(r.weakly_constant) << "\n";
  text << "compact: " << status_line(r.compact) << "\n";
  text << "weakly_compact: " << status_line(r.weakly_compact) << "\n";
  text << "accretive: " << status_line(r.accretive) << "\n";
  for (const auto& c : r.conflicts) text << "conflict: " << c << "\n";
  emit(g, r, text.str());
  return r.consistent() ? kOk : kRefuted;
}

int cmd_fix(const Globals& g, const std::string& input, std::size_t kmax, std::size_t depth) {
  Generator gen = read_generator(input);
  try {
    auto c = construct_fixed_point(gen, g.bounds(), ProbeConfig{kmax, depth, g.bounds()});
    std::ostringstream text;
    text << "path: " << (c.path == FixedPointCertificate::Path::Compact ? "compact" : "weak") << " k=" << c.k << "\n";
    text << "X = " << print(c.x) << "\n";
    text << "X G = X: " << to_string(c.join.kind) << (c.complete() ? "" : " (certificate incomplete)") << "\n";
    emit(g, c, text.str());
    return c.complete() ? kOk : kUnknown;
  } catch (const PreconditionError& e) {
    emit(g, json{{"error", e.what()}}, std::string("no fixed point constructed: ") + e.what());
    return kUnknown;
  } catch (const UnfoldError& e) {
    emit(g, json{{"error", e.what()}}, std::string("unfolding failed: ") + e.what());
    return e.reason() == UnfoldError::Reason::Shape ? kRefuted : kUnknown;
  }
}

int cmd_ext_eq(const Globals& g, const std::string& a, const std::string& b, const std::vector<std::string>& samples) {
  Generator ga = read_generator(a), gb = read_generator(b);
  std::vector<Term> ys;
  for (const auto& s : samples) ys.push_back(read_term(s));
  if (ys.empty()) ys = default_samples();
  auto r = ext_eq_bounded(ga, gb, ys, g.bounds());
  std::ostringstream text;
  for (std::size_t i = 0; i < ys.size(); ++i) text << print(ys[i]) << ": " << to_string(r.joins[i].kind) << "\n";
  text << (r.all_joined ? "extensionally equal on all samples" : r.distinct ? "distinct" : "undecided");
  emit(g, r, text.str());
  return r.all_joined ? kOk : r.distinct ? kRefuted : kUnknown;
}

int cmd_replay(const Globals& g, const std::string& only) {
  ReplayReport r;
  auto start = std::chrono::steady_clock::now();
  for (const auto& s : bundled_scripts(g.bounds()))
    if (only.empty() || s.name == only) r.scripts.push_back(run_script(s));
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.scripts.empty()) throw UsageError("no replay script named " + only);
  std::ostringstream text;
  for (const auto& s : r.scripts) text << (s.passed ? "PASS " : "FAIL ") << s.name << "  " << s.description << "\n";
  emit(g, r, text.str());
  return r.passed() ? kOk : kRefuted;
}

int cmd_hunt(const Globals& g, std::size_t size, unsigned threads) {
  auto r = hunt_double_fpc(size, g.bounds(), threads);
  std::ostringstream text;
  text << "scanned " << r.candidates_scanned << " closed terms of size <= " << size << "\n";
  text << "fpc verified " << r.fpc_verified << ", refuted " << r.fpc_refuted << ", unknown " << r.fpc_unknown << "\n";
  text << "double fpcs found: " << r.double_fpc_found.size() << "\n";
  for (const auto& c : r.double_fpc_found) text << "  " << print(c.term) << "\n";
  emit(g, r, text.str());
  return kOk;
}

int cmd_graph(const Globals& g, const std::string& input, bool dot) {
  Term t = read_term(input);
  auto graph = reduct_set(t, g.bounds());
  if (dot && !g.json) {
    std::cout << to_dot(graph);
    return kOk;
  }
  json nodes = json::array();
  for (const auto& n : graph.nodes) nodes.push_back(print(n));
  json edges = json::array();
  for (const auto& e : graph.edges) edges.push_back(json{{"from", e.from}, {"to", e.to}, {"position", e.position.str()}});
  json j{{"nodes", nodes}, {"edges", edges}, {"closed", graph.closed}, {"clipped", graph.clipped}};
  if (dot) j["dot"] = to_dot(graph);
  emit(g, j,
       std::to_string(graph.nodes.size()) + " nodes, " + std::to_string(graph.edges.size()) + " edges" +
           (graph.closed ? ", complete" : ", truncated"));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fpclab: lambda-calculus engine and fixed-point-combinator generator lab"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--fuel", g.fuel, "beta-step budget per search")->check(CLI::PositiveNumber);
  app.add_option("--max-nodes", g.max_nodes, "node budget for reduct searches")->check(CLI::PositiveNumber);
  app.add_option("--max-size", g.max_size, "term size cap")->check(CLI::PositiveNumber);
  app.add_flag("--json", g.json, "JSON output");

  std::string input, second, strategy = "normal", only;
  std::size_t steps = 0, depth = 6, kmax = 3, size = 9;
  unsigned threads = 0;
  bool dot = false;
  std::vector<std::string> samples;
  int result = kOk;
  auto run = [&](auto fn) { return [&, fn] { result = fn(); }; };

  auto* term = app.add_subcommand("term", "print a library combinator");
  term->add_option("name", input, "combinator name, e.g. THETA or C_3")->required();
  term->callback(run([&] { return cmd_term(g, input); }));

  auto* parse_cmd = app.add_subcommand("parse", "parse and print a term");
  parse_cmd->add_option("term", input, "term text, or - for stdin");
  parse_cmd->callback(run([&] { return cmd_parse(g, input); }));

  auto* reduce = app.add_subcommand("reduce", "reduce a term");
  reduce->add_option("term", input, "term text, or - for stdin");
  reduce->add_option("--strategy", strategy, "head or normal")->check(CLI::IsMember({"head", "normal"}));
  reduce->add_option("--steps", steps, "maximum steps (default: --fuel)");
  reduce->callback(run([&] { return cmd_reduce(g, input, strategy, steps == 0 ? g.fuel : steps); }));

  auto* bt = app.add_subcommand("bt", "Böhm-tree approximant");
  bt->add_option("term", input, "term text, or - for stdin");
  bt->add_option("--depth", depth, "approximant depth");
  bt->callback(run([&] { return cmd_bt(g, input, depth); }));

  auto* fpc = app.add_subcommand("fpc-check", "bounded fpc check: Y x = x (Y x)");
  fpc->add_option("term", input, "term text, or - for stdin");
  fpc->callback(run([&] { return cmd_fpc(g, input); }));

  auto* wfpc = app.add_subcommand("wfpc-check", "bounded weak fpc check on the approximant of Y x");
  wfpc->add_option("term", input, "term text, or - for stdin");
  wfpc->add_option("--depth", depth, "approximant depth");
  wfpc->callback(run([&] { return cmd_wfpc(g, input, depth); }));

  auto* classify_cmd = app.add_subcommand("gen-classify", "classification probes for a generator");
  classify_cmd->add_option("generator", input, "generator literal, e.g. \"[P; R]\"");
  classify_cmd->add_option("--kmax", kmax, "largest modulus tried");
  classify_cmd->add_option("--depth", depth, "approximant depth");
  classify_cmd->callback(run([&] { return cmd_classify(g, input, kmax, depth); }));

  auto* fix = app.add_subcommand("gen-fix", "construct X with X G = X");
  fix->add_option("generator", input, "generator literal");
  fix->add_option("--kmax", kmax, "largest modulus tried");
  fix->add_option("--depth", depth, "approximant depth for the weak path");
  fix->callback(run([&] { return cmd_fix(g, input, kmax, depth); }));

  auto* ext = app.add_subcommand("gen-ext-eq", "bounded extensional equality of two generators");
  ext->add_option("left", input, "generator literal")->required();
  ext->add_option("right", second, "generator literal")->required();
  ext->add_option("--sample", samples, "sample fpc (repeatable; default battery otherwise)");
  ext->callback(run([&] { return cmd_ext_eq(g, input, second, samples); }));

  auto* replay = app.add_subcommand("replay", "run the bundled replay scripts");
  replay->add_option("--script", only, "run only this script");
  replay->callback(run([&] { return cmd_replay(g, only); }));

  auto* hunt = app.add_subcommand("hunt", "search closed terms for a double fpc");
  hunt->add_option("--size", size, "largest term size (node count)");
  hunt->add_option("--threads", threads, "worker threads (default: hardware)");
  hunt->callback(run([&] { return cmd_hunt(g, size, threads); }));

  auto* graph = app.add_subcommand("graph", "reduct graph of a term");
  graph->add_option("term", input, "term text, or - for stdin");
  graph->add_flag("--dot", dot, "Graphviz output");
  graph->callback(run([&] { return cmd_graph(g, input, dot); }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return result;
}
