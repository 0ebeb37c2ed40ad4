#pragma once

// Beta reduction: redex positions, single steps, head and normal-order
// strategies, reduction-graph exploration and a bounded conversion oracle.
//
// Conversion is only semi-decidable, so every search here runs under Bounds
// and reports exhaustion as a value. The only definitive negative answer is
// two distinct beta-normal forms.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fpclab/term.hpp"

namespace fpclab {

using json = nlohmann::json;

enum class Move : char { Fun = 'f', Arg = 'a', Body = 'b' };

/// Path from the root to a redex.
struct RedexPosition {
  std::vector<Move> path;

  bool root() const noexcept { return path.empty(); }
  /// One character per move ("f", "a", "b"); the root is "".
  std::string str() const {
    std::string s;
    for (Move m : path) s += static_cast<char>(m);
    return s;
  }
  std::string label() const { return root() ? std::string("root") : str(); }

  static RedexPosition from_string(const std::string& s) {
    RedexPosition p;
    for (char c : s) {
      if (c != 'f' && c != 'a' && c != 'b') throw std::invalid_argument("bad redex path character '" + std::string(1, c) + "'");
      p.path.push_back(static_cast<Move>(c));
    }
    return p;
  }

  friend bool operator==(const RedexPosition&, const RedexPosition&) = default;
};

class InvalidPosition : public std::invalid_argument {
 public:
  explicit InvalidPosition(const RedexPosition& p)
      : std::invalid_argument("no redex at position '" + p.label() + "'") {}
};

/// Resource caps for every bounded search.
struct Bounds {
  std::size_t max_steps = 500;
  std::size_t max_nodes = 20000;
  std::size_t max_term_size = 4000;

  void validate() const {
    if (max_steps == 0 || max_nodes == 0 || max_term_size == 0)
      throw std::invalid_argument("bounds must be strictly positive");
  }

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

inline void to_json(json& j, const Bounds& b) {
  j = json{{"max_steps", b.max_steps}, {"max_nodes", b.max_nodes}, {"max_term_size", b.max_term_size}};
}
inline void from_json(const json& j, Bounds& b) {
  j.at("max_steps").get_to(b.max_steps);
  j.at("max_nodes").get_to(b.max_nodes);
  j.at("max_term_size").get_to(b.max_term_size);
}

// ---------------------------------------------------------------------------
// Redexes and steps

namespace detail {

inline void collect_redexes(const Term& t, std::vector<Move>& path, std::vector<RedexPosition>& out) {
  switch (t.kind()) {
    case Term::Kind::Lam:
      path.push_back(Move::Body);
      collect_redexes(t.body(), path, out);
      path.pop_back();
      break;
    case Term::Kind::App:
      if (t.is_redex()) out.push_back(RedexPosition{path});
      path.push_back(Move::Fun);
      collect_redexes(t.fun(), path, out);
      path.back() = Move::Arg;
      collect_redexes(t.arg(), path, out);
      path.pop_back();
      break;
    default:
      break;
  }
}

inline Term step_at(const Term& t, const RedexPosition& p, std::size_t i) {
  if (i == p.path.size()) {
    if (!t.is_redex()) throw InvalidPosition(p);
    return beta(t);
  }
  switch (p.path[i]) {
    case Move::Body:
      if (!t.is_lam()) throw InvalidPosition(p);
      return Term::lam_nameless(t.name(), step_at(t.body(), p, i + 1));
    case Move::Fun:
      if (!t.is_app()) throw InvalidPosition(p);
      return Term::app(step_at(t.fun(), p, i + 1), t.arg());
    case Move::Arg:
      if (!t.is_app()) throw InvalidPosition(p);
      return Term::app(t.fun(), step_at(t.arg(), p, i + 1));
  }
  throw InvalidPosition(p);
}

struct Successor {
  RedexPosition position;
  Term result;
};

inline void collect_successors(const Term& t, std::vector<Move>& path, std::vector<Successor>& out,
                               const std::function<Term(const Term&)>& rebuild) {
  switch (t.kind()) {
    case Term::Kind::Lam: {
      path.push_back(Move::Body);
      const std::string& hint = t.name();
      collect_successors(t.body(), path, out, [&](const Term& b) { return rebuild(Term::lam_nameless(hint, b)); });
      path.pop_back();
      break;
    }
    case Term::Kind::App: {
      if (t.is_redex()) out.push_back(Successor{RedexPosition{path}, rebuild(beta(t))});
      path.push_back(Move::Fun);
      collect_successors(t.fun(), path, out, [&](const Term& f) { return rebuild(Term::app(f, t.arg())); });
      path.back() = Move::Arg;
      collect_successors(t.arg(), path, out, [&](const Term& a) { return rebuild(Term::app(t.fun(), a)); });
      path.pop_back();
      break;
    }
    default:
      break;
  }
}

inline std::optional<Term> leftmost_outermost(const Term& t, std::vector<Move>& path) {
  switch (t.kind()) {
    case Term::Kind::Lam: {
      if (t.body().size() == 1) return std::nullopt;
      path.push_back(Move::Body);
      auto r = leftmost_outermost(t.body(), path);
      if (r) return Term::lam_nameless(t.name(), *r);
      path.pop_back();
      return std::nullopt;
    }
    case Term::Kind::App: {
      if (t.is_redex()) return beta(t);
      path.push_back(Move::Fun);
      if (auto r = leftmost_outermost(t.fun(), path)) return Term::app(*r, t.arg());
      path.back() = Move::Arg;
      if (auto r = leftmost_outermost(t.arg(), path)) return Term::app(t.fun(), *r);
      path.pop_back();
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace detail

/// Every beta-redex position, leftmost-outermost first.
inline std::vector<RedexPosition> redexes(const Term& t) {
  std::vector<RedexPosition> out;
  std::vector<Move> path;
  detail::collect_redexes(t, path, out);
  return out;
}

inline bool is_normal(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Lam:
      return is_normal(t.body());
    case Term::Kind::App:
      return !t.is_redex() && is_normal(t.fun()) && is_normal(t.arg());
    default:
      return true;
  }
}

/// Contracts the redex at `p`. Throws InvalidPosition when there is none.
inline Term step(const Term& t, const RedexPosition& p) { return detail::step_at(t, p, 0); }

/// All one-step reducts, in the order of redexes(t).
inline std::vector<detail::Successor> successors(const Term& t) {
  std::vector<detail::Successor> out;
  std::vector<Move> path;
  detail::collect_successors(t, path, out, [](const Term& x) { return x; });
  return out;
}

/// Position of the head redex, if t is not in head normal form.
inline std::optional<RedexPosition> head_redex(const Term& t) {
  RedexPosition p;
  const Term* cur = &t;
  while (cur->is_lam()) {
    p.path.push_back(Move::Body);
    cur = &cur->body();
  }
  std::size_t spine = 0;
  const Term* head = cur;
  while (head->is_app()) {
    head = &head->fun();
    ++spine;
  }
  if (!head->is_lam() || spine == 0) return std::nullopt;
  for (std::size_t i = 1; i < spine; ++i) p.path.push_back(Move::Fun);
  return p;
}

/// Contracts the head redex; nullopt when t is already in head normal form.
inline std::optional<Term> head_step(const Term& t) {
  auto p = head_redex(t);
  if (!p) return std::nullopt;
  return step(t, *p);
}

/// Leftmost-outermost step with its position.
inline std::optional<std::pair<RedexPosition, Term>> normal_step(const Term& t) {
  std::vector<Move> path;
  auto r = detail::leftmost_outermost(t, path);
  if (!r) return std::nullopt;
  return std::make_pair(RedexPosition{std::move(path)}, std::move(*r));
}

namespace detail {
inline void development_order(const Term& t, std::vector<Move>& path, std::vector<RedexPosition>& out) {
  switch (t.kind()) {
    case Term::Kind::Lam:
      path.push_back(Move::Body);
      development_order(t.body(), path, out);
      path.pop_back();
      return;
    case Term::Kind::App:
      path.push_back(Move::Fun);
      development_order(t.fun(), path, out);
      path.pop_back();
      path.push_back(Move::Arg);
      development_order(t.arg(), path, out);
      path.pop_back();
      if (t.is_redex()) out.push_back(RedexPosition{path});
      return;
    default:
      return;
  }
}
}  // namespace detail

/// Positions contracting every redex of t, one after the other, so that the
/// final term is the complete development of t (a Gross-Knuth step). Inner
/// redexes come first, so no redex of t is copied before it is contracted.
inline std::vector<RedexPosition> development(const Term& t) {
  std::vector<RedexPosition> out;
  std::vector<Move> path;
  detail::development_order(t, path, out);
  return out;
}

struct NormalizeResult {
  /// true: `term` is the beta-normal form. false: bounds ran out at `term`.
  bool normal = false;
  Term term;
  std::size_t steps = 0;
  std::vector<RedexPosition> path;
};

/// Leftmost-outermost normalization under bounds.max_steps and
/// bounds.max_term_size.
inline NormalizeResult normalize(const Term& t, const Bounds& bounds) {
  NormalizeResult r{false, t, 0, {}};
  while (true) {
    auto next = normal_step(r.term);
    if (!next) {
      r.normal = true;
      return r;
    }
    if (r.steps >= bounds.max_steps || next->second.size() > bounds.max_term_size) return r;
    r.path.push_back(std::move(next->first));
    r.term = std::move(next->second);
    ++r.steps;
  }
}

// ---------------------------------------------------------------------------
// Reduction graphs

struct ReductEdge {
  std::size_t from;
  RedexPosition position;
  std::size_t to;
};

struct ReductGraph {
  std::vector<Term> nodes;
  std::vector<ReductEdge> edges;
  /// Breadth-first depth of every node.
  std::vector<std::size_t> depth;
  /// Nodes that were admitted but not expanded (size cap, step cap, node cap).
  std::vector<std::size_t> clipped;
  /// true when every reduct was explored: the graph is the full reduct set.
  bool closed = false;

  std::optional<std::size_t> find(const Term& t) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i] == t) return i;
    return std::nullopt;
  }
  std::size_t out_degree(std::size_t node) const {
    std::size_t n = 0;
    for (const auto& e : edges) n += e.from == node;
    return n;
  }
};

/// Breadth-first closure of t under single steps, deduplicated by alpha
/// equivalence and truncated by bounds.
inline ReductGraph reduct_set(const Term& t, const Bounds& bounds) {
  ReductGraph g;
  std::unordered_map<Term, std::size_t> seen;
  g.nodes.push_back(t);
  g.depth.push_back(0);
  seen.emplace(t, 0);
  bool truncated = false;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const Term current = g.nodes[i];
    if (current.size() > bounds.max_term_size || g.depth[i] >= bounds.max_steps) {
      if (!is_normal(current)) {
        g.clipped.push_back(i);
        truncated = true;
      }
      continue;
    }
    bool expanded_fully = true;
    for (auto& s : successors(current)) {
      auto it = seen.find(s.result);
      if (it != seen.end()) {
        g.edges.push_back({i, std::move(s.position), it->second});
        continue;
      }
      if (g.nodes.size() >= bounds.max_nodes) {
        expanded_fully = false;
        continue;
      }
      std::size_t id = g.nodes.size();
      seen.emplace(s.result, id);
      g.nodes.push_back(std::move(s.result));
      g.depth.push_back(g.depth[i] + 1);
      g.edges.push_back({i, std::move(s.position), id});
    }
    if (!expanded_fully) {
      g.clipped.push_back(i);
      truncated = true;
    }
  }
  g.closed = !truncated;
  return g;
}

namespace detail {
inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}
}  // namespace detail

/// Graphviz rendering: node label = printed term, edge label = redex path.
inline std::string to_dot(const ReductGraph& g) {
  std::string out = "digraph reducts {\n  node [shape=box, fontname=\"monospace\"];\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    out += "  n" + std::to_string(i) + " [label=\"" + detail::dot_escape(print(g.nodes[i])) + "\"";
    if (std::find(g.clipped.begin(), g.clipped.end(), i) != g.clipped.end()) out += ", style=dashed";
    out += "];\n";
  }
  for (const auto& e : g.edges) {
    out += "  n" + std::to_string(e.from) + " -> n" + std::to_string(e.to) + " [label=\"" +
           detail::dot_escape(e.position.label()) + "\"];\n";
  }
  out += "}\n";
  return out;
}

// ---------------------------------------------------------------------------
// Bounded conversion

struct JoinVerdict {
  enum class Kind { Joined, RefutedDistinctNormalForms, NotJoinedWithin };

  Kind kind = Kind::NotJoinedWithin;
  /// Joined: the common reduct.
  std::optional<Term> witness;
  std::vector<RedexPosition> left_path;
  std::vector<RedexPosition> right_path;
  /// Refuted: the two normal forms.
  std::optional<Term> nf_left;
  std::optional<Term> nf_right;
  Bounds bounds;
  std::size_t explored = 0;

  bool joined() const noexcept { return kind == Kind::Joined; }
  bool refuted() const noexcept { return kind == Kind::RefutedDistinctNormalForms; }
};

inline const char* to_string(JoinVerdict::Kind k) {
  switch (k) {
    case JoinVerdict::Kind::Joined:
      return "joined";
    case JoinVerdict::Kind::RefutedDistinctNormalForms:
      return "refuted_distinct_normal_forms";
    case JoinVerdict::Kind::NotJoinedWithin:
      return "not_joined_within";
  }
  return "?";
}

inline json path_json(const std::vector<RedexPosition>& path) {
  json a = json::array();
  for (const auto& p : path) a.push_back(p.str());
  return a;
}

inline void to_json(json& j, const JoinVerdict& v) {
  j = json{{"kind", to_string(v.kind)}, {"bounds", v.bounds}, {"explored", v.explored}};
  if (v.witness) {
    j["witness"] = print(*v.witness);
    j["steps_left"] = path_json(v.left_path);
    j["steps_right"] = path_json(v.right_path);
  }
  if (v.nf_left) j["nf_left"] = print(*v.nf_left);
  if (v.nf_right) j["nf_right"] = print(*v.nf_right);
}

/// A reduction path from a to b: the normal-order lane first, then a
/// breadth-first search of the reducts of a. nullopt when b was not reached.
inline std::optional<std::vector<RedexPosition>> reduces_to(const Term& a, const Term& b, const Bounds& bounds) {
  bounds.validate();
  auto lane = normalize(a, bounds);
  Term current = a;
  if (current == b) return std::vector<RedexPosition>{};
  for (std::size_t i = 0; i < lane.path.size(); ++i) {
    current = step(current, lane.path[i]);
    if (current == b) return std::vector<RedexPosition>(lane.path.begin(), lane.path.begin() + i + 1);
  }
  struct Visit {
    Term term;
    std::size_t parent;
    RedexPosition position;
    std::size_t depth;
  };
  std::vector<Visit> seen{{a, 0, {}, 0}};
  std::unordered_set<Term> known{a};
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i].depth >= bounds.max_steps || seen[i].term.size() > bounds.max_term_size) continue;
    const Term t = seen[i].term;
    for (auto& s : successors(t)) {
      if (!known.insert(s.result).second) continue;
      seen.push_back({s.result, i, std::move(s.position), seen[i].depth + 1});
      if (seen.back().term == b) {
        std::vector<RedexPosition> out;
        for (std::size_t j = seen.size() - 1; j != 0; j = seen[j].parent) out.push_back(seen[j].position);
        return std::vector<RedexPosition>(out.rbegin(), out.rend());
      }
      if (seen.size() >= bounds.max_nodes) return std::nullopt;
    }
  }
  return std::nullopt;
}

namespace detail {

// One side of the bidirectional search. Nodes come from two sources: the
// normal-order lane (a single deep probe) and the breadth-first frontier.
class JoinSide {
 public:
  struct Entry {
    Term term;
    std::size_t parent;
    RedexPosition position;
    std::size_t depth;
  };
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit JoinSide(const Term& root) {
    entries_.push_back({root, npos, {}, 0});
    bfs_.emplace(root, 0);
    frontier_ = {0};
  }

  const Entry& entry(std::size_t i) const { return entries_[i]; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<std::size_t>& lane() const { return lane_; }

  std::optional<std::size_t> lookup(const Term& t) const {
    if (auto it = bfs_.find(t); it != bfs_.end()) return it->second;
    if (auto it = lane_index_.find(t); it != lane_index_.end()) return it->second;
    return std::nullopt;
  }

  std::size_t add_lane(const Term& t, std::size_t parent, RedexPosition pos) {
    std::size_t id = entries_.size();
    std::size_t depth = parent == npos ? 0 : entries_[parent].depth + 1;
    entries_.push_back({t, parent, std::move(pos), depth});
    lane_index_.emplace(t, id);
    lane_.push_back(id);
    return id;
  }

  std::vector<RedexPosition> path_to(std::size_t i) const {
    std::vector<RedexPosition> out;
    while (entries_[i].parent != npos) {
      out.push_back(entries_[i].position);
      i = entries_[i].parent;
    }
    return {out.rbegin(), out.rend()};
  }

  bool frontier_empty() const { return frontier_.empty(); }
  std::size_t level() const { return level_; }
  bool clipped() const { return clipped_; }

  // Expands one breadth-first level. Returns the id of a node met on the
  // other side, if any. `budget` is the number of nodes still admissible.
  template <class Other>
  std::optional<std::pair<std::size_t, std::size_t>> expand_level(const Other& other, const Bounds& bounds,
                                                                  std::size_t& budget) {
    std::vector<std::size_t> next;
    for (std::size_t idx : frontier_) {
      const Term current = entries_[idx].term;
      if (current.size() > bounds.max_term_size) {
        clipped_ = true;
        continue;
      }
      for (auto& s : successors(current)) {
        if (bfs_.count(s.result) != 0) continue;
        if (budget == 0) {
          clipped_ = true;
          frontier_.clear();
          return std::nullopt;
        }
        --budget;
        std::size_t id = entries_.size();
        entries_.push_back({s.result, idx, std::move(s.position), entries_[idx].depth + 1});
        bfs_.emplace(s.result, id);
        next.push_back(id);
        if (auto hit = other.lookup(s.result)) return std::make_pair(id, *hit);
      }
    }
    frontier_ = std::move(next);
    ++level_;
    return std::nullopt;
  }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<Term, std::size_t> bfs_;
  std::unordered_map<Term, std::size_t> lane_index_;
  std::vector<std::size_t> lane_;
  std::vector<std::size_t> frontier_;
  std::size_t level_ = 0;
  bool clipped_ = false;
};

inline void run_lane(JoinSide& side, const Term& start, const Bounds& bounds, bool& normal) {
  Term current = start;
  std::size_t parent = side.add_lane(start, JoinSide::npos, {});
  normal = false;
  for (std::size_t steps = 0;; ++steps) {
    auto next = normal_step(current);
    if (!next) {
      normal = true;
      return;
    }
    if (steps >= bounds.max_steps || next->second.size() > bounds.max_term_size) return;
    parent = side.add_lane(next->second, parent, std::move(next->first));
    current = std::move(next->second);
  }
}

// A term read as \x1..xb. h a1..an with h a variable or an abstraction.
struct Spine {
  std::vector<std::string> binders;
  Term head;
  std::vector<Term> args;
};

inline Spine spine_of(const Term& t) {
  std::vector<std::string> binders;
  const Term* cur = &t;
  while (cur->is_lam()) {
    binders.push_back(cur->name());
    cur = &cur->body();
  }
  std::vector<Term> args;
  while (cur->is_app()) {
    args.push_back(cur->arg());
    cur = &cur->fun();
  }
  return {std::move(binders), *cur, {args.rbegin(), args.rend()}};
}

inline Term rebuild(const Spine& s, const std::vector<Term>& args) {
  Term t = Term::apps(s.head, args);
  for (auto it = s.binders.rbegin(); it != s.binders.rend(); ++it) t = Term::lam_nameless(*it, t);
  return t;
}

inline std::vector<RedexPosition> prefixed(const std::vector<Move>& prefix, const std::vector<RedexPosition>& path) {
  std::vector<RedexPosition> out;
  out.reserve(path.size());
  for (const auto& p : path) {
    RedexPosition q{prefix};
    q.path.insert(q.path.end(), p.path.begin(), p.path.end());
    out.push_back(std::move(q));
  }
  return out;
}

struct JoinContext {
  std::size_t budget;
  std::unordered_set<std::size_t> failed;
};

// Sub-searches used when splitting a join into argument-wise joins.
inline constexpr std::size_t kSplitDepth = 2;
inline constexpr std::size_t kSplitLane = 64;
inline constexpr std::size_t kSplitPairs = 16;
inline constexpr std::size_t kSplitSteps = 100;
inline constexpr std::size_t kSplitNodes = 1000;

JoinVerdict join_impl(const Term& a, const Term& b, const Bounds& bounds, JoinContext& ctx, std::size_t depth);

// Looks for lane terms l = \x. h a1..an and r = \x. h b1..bn with the same
// head, and joins a_i with b_i; the common reduct is \x. h c1..cn.
inline std::optional<JoinVerdict> split_join(const JoinSide& left, const JoinSide& right, const Bounds& bounds,
                                             JoinContext& ctx, std::size_t depth) {
  std::unordered_multimap<std::size_t, std::size_t> by_shape;
  auto shape = [](const Spine& s) {
    return detail::mix(detail::mix(s.binders.size(), s.args.size()), std::hash<Term>{}(s.head));
  };
  std::vector<Spine> right_spines;
  const auto& rl = right.lane();
  for (std::size_t j = 0; j < rl.size() && j < kSplitLane; ++j) {
    right_spines.push_back(spine_of(right.entry(rl[j]).term));
    if (!right_spines.back().args.empty()) by_shape.emplace(shape(right_spines.back()), j);
  }
  struct Candidate {
    std::size_t differing, i, j;
    Spine left;
  };
  std::vector<Candidate> candidates;
  const auto& ll = left.lane();
  for (std::size_t i = 0; i < ll.size() && i < kSplitLane; ++i) {
    Spine ls = spine_of(left.entry(ll[i]).term);
    if (ls.args.empty()) continue;
    auto range = by_shape.equal_range(shape(ls));
    for (auto it = range.first; it != range.second; ++it) {
      const Spine& rs = right_spines[it->second];
      if (rs.binders.size() != ls.binders.size() || rs.args.size() != ls.args.size() || !(rs.head == ls.head))
        continue;
      std::size_t differing = 0;
      for (std::size_t k = 0; k < ls.args.size(); ++k) differing += !(ls.args[k] == rs.args[k]);
      candidates.push_back({differing, i, it->second, ls});
    }
  }
  // Fewest differing arguments first, then the earliest lane terms.
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.differing, a.i, a.j) < std::tie(b.differing, b.i, b.j);
  });
  Bounds sub = bounds;
  sub.max_steps = std::min(bounds.max_steps, kSplitSteps);
  std::size_t tried = 0;
  for (const auto& cand : candidates) {
    const Spine& ls = cand.left;
    const Spine& rs = right_spines[cand.j];
    const std::size_t i = cand.i;
    if (tried++ >= kSplitPairs || ctx.budget == 0) return std::nullopt;
    std::vector<Term> witness_args;
    std::vector<RedexPosition> lpath = left.path_to(ll[i]);
    std::vector<RedexPosition> rpath = right.path_to(rl[cand.j]);
    std::size_t n = ls.args.size();
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) {
      if (ls.args[k] == rs.args[k]) {
        witness_args.push_back(ls.args[k]);
        continue;
      }
      std::size_t key = detail::mix(std::hash<Term>{}(ls.args[k]), std::hash<Term>{}(rs.args[k]));
      if (ctx.failed.count(key) != 0) {
        ok = false;
        break;
      }
      sub.max_nodes = std::max<std::size_t>(1, std::min(ctx.budget, kSplitNodes));
      auto v = join_impl(ls.args[k], rs.args[k], sub, ctx, depth - 1);
      if (!v.joined()) {
        ctx.failed.insert(key);
        ok = false;
        break;
      }
      std::vector<Move> prefix(ls.binders.size(), Move::Body);
      prefix.insert(prefix.end(), n - 1 - k, Move::Fun);
      prefix.push_back(Move::Arg);
      auto lp = prefixed(prefix, v.left_path), rp = prefixed(prefix, v.right_path);
      lpath.insert(lpath.end(), lp.begin(), lp.end());
      rpath.insert(rpath.end(), rp.begin(), rp.end());
      witness_args.push_back(*v.witness);
    }
    if (!ok) continue;
    JoinVerdict v;
    v.kind = JoinVerdict::Kind::Joined;
    v.witness = rebuild(ls, witness_args);
    v.left_path = std::move(lpath);
    v.right_path = std::move(rpath);
    return v;
  }
  return std::nullopt;
}

inline JoinVerdict join_impl(const Term& a, const Term& b, const Bounds& bounds, JoinContext& ctx,
                             std::size_t depth) {
  JoinVerdict v;
  v.bounds = bounds;
  if (a == b) {
    v.kind = JoinVerdict::Kind::Joined;
    v.witness = a;
    v.explored = 1;
    return v;
  }

  JoinSide left(a), right(b);
  bool left_normal = false, right_normal = false;
  run_lane(left, a, bounds, left_normal);
  run_lane(right, b, bounds, right_normal);

  auto joined = [&](std::size_t li, std::size_t ri) {
    v.kind = JoinVerdict::Kind::Joined;
    v.witness = left.entry(li).term;
    v.left_path = left.path_to(li);
    v.right_path = right.path_to(ri);
    v.explored = left.size() + right.size();
    return v;
  };

  // Lane against lane, then lanes against the roots, in lane order.
  for (std::size_t ri : right.lane()) {
    if (auto hit = left.lookup(right.entry(ri).term)) return joined(*hit, ri);
  }
  if (left_normal && right_normal) {
    v.kind = JoinVerdict::Kind::RefutedDistinctNormalForms;
    v.nf_left = left.entry(left.lane().back()).term;
    v.nf_right = right.entry(right.lane().back()).term;
    v.explored = left.size() + right.size();
    return v;
  }

  std::size_t start_budget = ctx.budget;
  if (depth > 0) {
    // Splitting may spend at most a quarter of the budget.
    std::size_t reserve = ctx.budget - ctx.budget / 4;
    ctx.budget /= 4;
    auto split = split_join(left, right, bounds, ctx, depth);
    ctx.budget += reserve;
    if (split) {
      split->bounds = bounds;
      split->explored = left.size() + right.size() + (start_budget - ctx.budget);
      return *split;
    }
  }

  std::size_t budget = std::min(ctx.budget, bounds.max_nodes > 2 ? bounds.max_nodes - 2 : std::size_t{0});
  std::size_t granted = budget;
  bool turn_left = true;
  std::optional<JoinVerdict> found;
  while (budget > 0 && !found) {
    bool left_live = !left.frontier_empty() && left.level() < bounds.max_steps;
    bool right_live = !right.frontier_empty() && right.level() < bounds.max_steps;
    if (!left_live && !right_live) break;
    bool use_left = turn_left ? left_live : !right_live;
    if (use_left) {
      if (auto hit = left.expand_level(right, bounds, budget)) found = joined(hit->first, hit->second);
    } else {
      if (auto hit = right.expand_level(left, bounds, budget)) found = joined(hit->second, hit->first);
    }
    turn_left = !turn_left;
  }
  ctx.budget -= std::min(ctx.budget, granted - budget);
  if (found) {
    found->explored += start_budget - ctx.budget;
    return *found;
  }
  v.kind = JoinVerdict::Kind::NotJoinedWithin;
  v.explored = left.size() + right.size() + (start_budget - ctx.budget);
  return v;
}

}  // namespace detail

/// Bounded search for a common reduct of a and b.
///
/// Both terms are first driven along their normal-order lanes; two distinct
/// normal forms refute convertibility. Next, lane terms of the same shape
/// \x. h a1..an on both sides are split into argument-wise joins (a smaller
/// search per argument). Finally a bidirectional breadth-first search
/// alternates levels between the two sides (each side at most max_steps deep,
/// max_nodes admitted in total across all sub-searches) and reports the
/// first node found on both sides, lanes included.
inline JoinVerdict join_bounded(const Term& a, const Term& b, const Bounds& bounds) {
  bounds.validate();
  detail::JoinContext ctx{bounds.max_nodes, {}};
  auto v = detail::join_impl(a, b, bounds, ctx, detail::kSplitDepth);
  v.bounds = bounds;
  return v;
}

}  // namespace fpclab
