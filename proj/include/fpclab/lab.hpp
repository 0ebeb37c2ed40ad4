#pragma once

// Scripted replays of the displayed conversions, closed-term enumeration and
// the bounded search for a double fpc (delta Y = Y = Y delta).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fpclab/boehm.hpp"
#include "fpclab/combinators.hpp"
#include "fpclab/fpc.hpp"
#include "fpclab/generators.hpp"
#include "fpclab/reduction.hpp"
#include "fpclab/term.hpp"

namespace fpclab {

enum class Relation {
  Joins,
  ReducesTo,
  AlphaEq,
  /// The first `steps` reducts of lhs form a simple path (one redex each).
  DeterministicPath,
};

inline const char* to_string(Relation r) {
  switch (r) {
    case Relation::Joins:
      return "joins";
    case Relation::ReducesTo:
      return "reduces-to";
    case Relation::AlphaEq:
      return "alpha-eq";
    case Relation::DeterministicPath:
      return "deterministic-path";
  }
  return "?";
}

struct ReplayLink {
  Term lhs;
  Term rhs;
  Relation relation = Relation::Joins;
  std::size_t steps = 0;
};

struct ReplayScript {
  std::string name;
  std::string description;
  std::vector<std::pair<std::string, Term>> setup;
  std::vector<ReplayLink> chain;
  Bounds bounds;
};

struct LinkResult {
  bool passed = false;
  std::optional<JoinVerdict> join;
  std::optional<std::vector<RedexPosition>> path;
  std::string detail;
};

struct ScriptResult {
  std::string name;
  std::string description;
  bool passed = false;
  std::vector<LinkResult> links;
  double seconds = 0;
};

struct ReplayReport {
  std::vector<ScriptResult> scripts;
  double seconds = 0;

  bool passed() const {
    return std::all_of(scripts.begin(), scripts.end(), [](const ScriptResult& s) { return s.passed; });
  }
};

namespace detail {

inline LinkResult check_deterministic(const Term& start, std::size_t steps, const Bounds& bounds) {
  LinkResult r;
  std::unordered_set<Term> seen{start};
  Term current = start;
  for (std::size_t i = 0; i < steps; ++i) {
    auto next = successors(current);
    if (next.size() != 1) {
      r.detail = "reduct " + std::to_string(i) + " has " + std::to_string(next.size()) + " redexes";
      return r;
    }
    if (next.front().result.size() > bounds.max_term_size) {
      r.detail = "term size cap reached at step " + std::to_string(i + 1);
      return r;
    }
    current = next.front().result;
    if (!seen.insert(current).second) {
      r.detail = "reduct " + std::to_string(i + 1) + " repeats an earlier one";
      return r;
    }
  }
  r.passed = true;
  r.detail = std::to_string(steps) + " reducts, out-degree 1 throughout";
  return r;
}

}  // namespace detail

inline LinkResult check_link(const ReplayLink& link, const Bounds& bounds) {
  LinkResult r;
  switch (link.relation) {
    case Relation::Joins:
      r.join = join_bounded(link.lhs, link.rhs, bounds);
      r.passed = r.join->joined();
      r.detail = to_string(r.join->kind);
      break;
    case Relation::ReducesTo:
      r.path = reduces_to(link.lhs, link.rhs, bounds);
      r.passed = r.path.has_value();
      r.detail = r.passed ? std::to_string(r.path->size()) + " steps" : "target not reached within bounds";
      break;
    case Relation::AlphaEq:
      r.passed = link.lhs == link.rhs;
      r.detail = r.passed ? "alpha-equal" : "different terms";
      break;
    case Relation::DeterministicPath:
      r = detail::check_deterministic(link.lhs, link.steps, bounds);
      break;
  }
  return r;
}

inline ScriptResult run_script(const ReplayScript& script) {
  auto start = std::chrono::steady_clock::now();
  ScriptResult out;
  out.name = script.name;
  out.description = script.description;
  out.passed = true;
  for (const auto& link : script.chain) {
    out.links.push_back(check_link(link, script.bounds));
    out.passed = out.passed && out.links.back().passed;
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

/// x^k(t).
inline Term power_app(const Term& x, std::size_t k, const Term& t) { return iterate(x, k, t); }

/// The bundled scripts, one per displayed derivation.
inline std::vector<ReplayScript> bundled_scripts(const Bounds& bounds = {}) {
  using lib::delta;
  using lib::I;
  using lib::K;
  using lib::Theta;
  const Term x = Term::var("x^");
  auto fp = [&](const Term& y) { return ReplayLink{Term::app(y, x), Term::app(x, Term::app(y, x)), Relation::Joins}; };
  std::vector<ReplayScript> out;

  out.push_back({"turing-fpc",
                 "Theta x = x (Theta x), by reduction",
                 {{"Theta", Theta()}},
                 {{Term::app(Theta(), x), Term::app(x, Term::app(Theta(), x)), Relation::ReducesTo}, fp(Theta())},
                 bounds});

  out.push_back({"curry-to-turing",
                 "Y delta = Theta",
                 {{"Y", lib::Y_curry()}, {"delta", delta()}},
                 {{Term::app(lib::Y_curry(), delta()), Theta(), Relation::Joins}},
                 bounds});

  {
    ReplayScript s{"theta-param", "Theta_M x ->> x (Theta_M x) for M = I, K, z", {}, {}, bounds};
    for (const Term& m : {I(), K(), Term::var("z")}) {
      Term t = theta_param(m);
      s.setup.emplace_back("Theta_" + print(m), t);
      s.chain.push_back({Term::app(t, x), Term::app(x, Term::app(t, x)), Relation::ReducesTo});
    }
    out.push_back(std::move(s));
  }

  {
    Term w = psi_builder("z");
    out.push_back({"psi-stage",
                   "Psi_z x ->> x (W_z W_z (z I) x)",
                   {{"Psi_z", psi("z")}},
                   {{Term::app(psi("z"), x),
                     Term::app(x, Term::apps(w, {w, Term::app(Term::var("z"), I()), x})), Relation::ReducesTo}},
                   bounds});
  }

  {
    const Term g = lib::G_bracket();
    Term yg = Term::app(Theta(), g);
    Term mid = Term::app(x, Term::apps(yg, {Term::app(K(), lib::pair(yg, x)), I()}));
    out.push_back({"bracket-chain",
                   "Y G x = x (Y G (K [Y G, x]) I) = x (Y G x)",
                   {{"G", g}},
                   {{Term::app(yg, x), mid, Relation::Joins}, {mid, Term::app(x, Term::app(yg, x)), Relation::Joins}},
                   bounds});
  }

  {
    Term ypq = Term::apps(Theta(), {lib::P(), lib::Q()});
    Term cpq = Term::apps(lib::Y_curry(), {lib::P(), lib::Q()});
    out.push_back({"pq-chain",
                   "Y P Q x = P (Y P) Q x = Q (Y P) x = x (Y P Q x)",
                   {{"P", lib::P()}, {"Q", lib::Q()}},
                   {{Term::app(ypq, x), Term::app(x, Term::app(ypq, x)), Relation::ReducesTo}, fp(ypq), fp(cpq)},
                   bounds});
  }

  {
    Term ypr = Term::apps(Theta(), {lib::P(), lib::R()});
    out.push_back({"pr-chain",
                   "Y P R x = W W (Y P Q x) x = x (Y P R x)",
                   {{"P", lib::P()}, {"R", lib::R()}},
                   {fp(ypr)},
                   bounds});
  }

  {
    Term stage0 = upsilon_stage(x, "c", 0);
    ReplayScript s{"upsilon-ladder",
                   "Upsilon x -> Upsilon^0_x, which reduces deterministically through x^k(Upsilon^k_x)",
                   {{"Upsilon", upsilon("c")}},
                   {{Term::app(upsilon("c"), x), stage0, Relation::ReducesTo},
                    {stage0, stage0, Relation::DeterministicPath, 60}},
                   bounds};
    for (std::size_t k = 0; k <= 10; ++k)
      s.chain.push_back({Term::app(upsilon("c"), x), power_app(x, k, upsilon_stage(x, "c", k)), Relation::ReducesTo});
    out.push_back(std::move(s));
  }

  {
    const Term g = lib::G_ck();
    Term ck = Term::app(lib::C(), K());
    Term ygk = Term::apps(Theta(), {g, K()});
    Term ygck = Term::apps(Theta(), {g, ck});
    out.push_back({"ck-chain",
                   "C K = K I, C (C K) = K, Y G K = Y G (C K) = delta (Y G K)",
                   {{"G", g}, {"C", lib::C()}},
                   {{ck, Term::app(K(), I()), Relation::Joins},
                    {Term::app(lib::C(), ck), K(), Relation::Joins},
                    {ygk, ygck, Relation::Joins},
                    {ygck, Term::app(delta(), ygk), Relation::Joins},
                    fp(ygk)},
                   bounds});
  }

  {
    Term yg = Term::app(Theta(), lib::Theta_gen());
    out.push_back({"theta-gen",
                   "Theta (\\y. Theta_y) is an fpc",
                   {{"G", lib::Theta_gen()}},
                   {fp(yg), {yg, theta_param(Term::app(Theta(), lib::Theta_gen())), Relation::Joins}},
                   bounds});
  }
  return out;
}

inline ReplayReport replay_all(const Bounds& bounds = {}) {
  auto start = std::chrono::steady_clock::now();
  ReplayReport r;
  for (const auto& s : bundled_scripts(bounds)) r.scripts.push_back(run_script(s));
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline void to_json(json& j, const LinkResult& r) {
  j = json{{"passed", r.passed}, {"detail", r.detail}};
  if (r.join) j["join"] = *r.join;
  if (r.path) j["path"] = path_json(*r.path);
}

inline void to_json(json& j, const ScriptResult& s) {
  j = json{{"name", s.name}, {"description", s.description}, {"passed", s.passed}, {"links", s.links},
           {"seconds", s.seconds}};
}

inline void to_json(json& j, const ReplayReport& r) {
  j = json{{"passed", r.passed()}, {"scripts", r.scripts}, {"seconds", r.seconds}};
}

// ---------------------------------------------------------------------------
// Enumeration

namespace detail {

class Enumerator {
 public:
  // Terms of exactly `size` nodes whose loose indices stay below `depth`.
  const std::vector<Term>& terms(std::size_t size, std::size_t depth) {
    auto key = std::make_pair(size, depth);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Term> out;
    if (size == 1) {
      for (std::uint32_t i = 0; i < depth; ++i) out.push_back(Term::bound(i));
    } else if (size >= 2) {
      std::string hint(1, static_cast<char>('a' + depth % 26));
      for (const auto& body : terms(size - 1, depth + 1)) out.push_back(Term::lam_nameless(hint, body));
      for (std::size_t f = 1; f + 2 <= size; ++f) {
        const auto funs = terms(f, depth);
        const auto& args = terms(size - 1 - f, depth);
        for (const auto& fn : funs)
          for (const auto& a : args) out.push_back(Term::app(fn, a));
      }
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Term>> memo_;
};

}  // namespace detail

/// Closed terms of exactly `size` nodes (variable 1, abstraction 1 + body,
/// application 1 + both), one per alpha class, in a fixed order: variables,
/// then abstractions, then applications by growing function size.
inline std::vector<Term> closed_terms(std::size_t size) {
  detail::Enumerator e;
  return e.terms(size, 0);
}

/// Closed terms of size 1..size_max, smallest first.
inline std::vector<Term> closed_terms_up_to(std::size_t size_max) {
  detail::Enumerator e;
  std::vector<Term> out;
  for (std::size_t s = 1; s <= size_max; ++s) {
    const auto& level = e.terms(s, 0);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Double fpc hunt

struct HuntCandidate {
  std::size_t index = 0;
  Term term;
  Verdict fpc = Verdict::Unknown;
  /// Only for fpc-verified candidates: Y against Y delta, and delta Y against Y.
  std::optional<JoinVerdict> right;
  std::optional<JoinVerdict> left;

  bool double_fpc() const { return fpc == Verdict::Verified && right && right->joined() && left && left->joined(); }
};

struct HuntReport {
  std::size_t size_max = 0;
  Bounds bounds;
  std::size_t candidates_scanned = 0;
  std::size_t fpc_verified = 0;
  std::size_t fpc_refuted = 0;
  std::size_t fpc_unknown = 0;
  std::vector<HuntCandidate> candidates;
  std::vector<HuntCandidate> double_fpc_found;
  double seconds = 0;
};

/// Depth of the approximant used to discard non-fpcs before any join search:
/// an fpc is a weak fpc, so a definite mismatch refutes.
inline constexpr std::size_t kHuntFilterDepth = 3;

inline HuntCandidate hunt_candidate(std::size_t index, const Term& y, const Bounds& bounds) {
  HuntCandidate c{index, y, Verdict::Unknown, std::nullopt, std::nullopt};
  auto weak = is_wfpc_bounded(y, kHuntFilterDepth, bounds.max_steps);
  if (weak.refuted()) {
    c.fpc = Verdict::Refuted;
    return c;
  }
  c.fpc = is_fpc_bounded(y, bounds).verdict;
  if (c.fpc == Verdict::Verified) {
    c.right = join_bounded(y, Term::app(y, lib::delta()), bounds);
    c.left = join_bounded(Term::app(lib::delta(), y), y, bounds);
  }
  return c;
}

/// Checks every closed term of size <= size_max. Candidates are evaluated on
/// `threads` workers; the report is ordered by enumeration index.
inline HuntReport hunt_double_fpc(std::size_t size_max, const Bounds& bounds, unsigned threads = 0) {
  bounds.validate();
  auto start = std::chrono::steady_clock::now();
  HuntReport r;
  r.size_max = size_max;
  r.bounds = bounds;
  std::vector<Term> terms = closed_terms_up_to(size_max);
  r.candidates_scanned = terms.size();
  if (threads == 0) threads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  std::vector<std::optional<HuntCandidate>> results(terms.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < terms.size(); i = next++) results[i] = hunt_candidate(i, terms[i], bounds);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& c : results) {
    switch (c->fpc) {
      case Verdict::Verified:
        ++r.fpc_verified;
        break;
      case Verdict::Refuted:
        ++r.fpc_refuted;
        break;
      case Verdict::Unknown:
        ++r.fpc_unknown;
        break;
    }
    if (c->double_fpc()) r.double_fpc_found.push_back(*c);
    r.candidates.push_back(std::move(*c));
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline void to_json(json& j, const HuntCandidate& c) {
  j = json{{"index", c.index}, {"term", print(c.term)}, {"is_fpc", to_string(c.fpc)}};
  j["join_y_ydelta"] = c.right ? json(*c.right) : json("skipped");
  j["join_deltay_y"] = c.left ? json(*c.left) : json("skipped");
}

/// Candidates refuted by the filter are counted but not listed.
inline void to_json(json& j, const HuntReport& r) {
  json listed = json::array();
  for (const auto& c : r.candidates)
    if (c.fpc != Verdict::Refuted) listed.push_back(c);
  j = json{{"size_max", r.size_max},
           {"bounds", r.bounds},
           {"candidates_scanned", r.candidates_scanned},
           {"fpc_verified", r.fpc_verified},
           {"fpc_refuted", r.fpc_refuted},
           {"fpc_unknown", r.fpc_unknown},
           {"candidates", listed},
           {"double_fpc_found", r.double_fpc_found},
           {"seconds", r.seconds}};
}

}  // namespace fpclab
