#pragma once

// Head normal forms and finite Böhm-tree approximants.
//
// An approximant under-approximates the Böhm tree: a subterm whose head
// reduction does not terminate within the fuel becomes Bottom, exactly like
// a genuinely unsolvable one. Disagreement between two non-Bottom nodes and
// presence of a variable at a node head are therefore definitive, while
// agreement and absence are evidence up to the explored depth.

#include <cstddef>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fpclab/reduction.hpp"
#include "fpclab/term.hpp"

namespace fpclab {

/// Default cap on intermediate term size during head reduction.
inline constexpr std::size_t kHeadSizeCap = 200000;

struct HeadNormalForm {
  bool solved = false;
  /// Binder hints of lambda x1..xn. head args.
  std::vector<std::string> binders;
  /// Free variable, or a bound index (relative to the term under `binders`).
  std::optional<Term> head;
  std::vector<Term> args;
  std::size_t steps = 0;
  /// Head reduction revisited a term, so it can never terminate.
  bool proven_unsolvable = false;
  /// The last term reached (the hnf itself when solved).
  std::optional<Term> last;
};

/// Runs head reduction for at most `fuel` steps.
inline HeadNormalForm head_normal_form(const Term& t, std::size_t fuel, std::size_t max_term_size = kHeadSizeCap) {
  HeadNormalForm r;
  Term current = t;
  // Head reduction is deterministic: revisiting a term means it loops forever.
  std::unordered_set<Term> visited{t};
  for (;;) {
    auto next = head_step(current);
    if (!next) break;
    if (r.steps >= fuel || next->size() > max_term_size) {
      r.last = current;
      return r;
    }
    current = std::move(*next);
    ++r.steps;
    if (!visited.insert(current).second) {
      r.proven_unsolvable = true;
      r.last = current;
      return r;
    }
  }
  r.solved = true;
  r.last = current;
  const Term* cur = &current;
  while (cur->is_lam()) {
    r.binders.push_back(cur->name());
    cur = &cur->body();
  }
  std::vector<Term> spine;
  while (cur->is_app()) {
    spine.push_back(cur->arg());
    cur = &cur->fun();
  }
  r.head = *cur;
  r.args.assign(spine.rbegin(), spine.rend());
  return r;
}

// ---------------------------------------------------------------------------

struct BoehmApprox {
  enum class Kind { Bottom, Node };

  Kind kind = Kind::Bottom;
  /// Bottom only: head reduction was shown to cycle (not merely out of fuel).
  bool unsolvable = false;
  std::vector<std::string> binders;
  /// Node head: either a free name, or a de Bruijn index into the stack of
  /// binders of all enclosing nodes (this node's binders innermost).
  bool head_bound = false;
  std::uint32_t head_index = 0;
  std::string head_name;
  std::vector<BoehmApprox> children;

  static BoehmApprox bottom(bool unsolvable = false) {
    BoehmApprox a;
    a.unsolvable = unsolvable;
    return a;
  }
  static BoehmApprox free_node(std::string head, std::vector<BoehmApprox> children = {},
                               std::vector<std::string> binders = {}) {
    BoehmApprox a;
    a.kind = Kind::Node;
    a.head_name = std::move(head);
    a.children = std::move(children);
    a.binders = std::move(binders);
    return a;
  }
  static BoehmApprox bound_node(std::vector<std::string> binders, std::uint32_t index,
                                std::vector<BoehmApprox> children = {}) {
    BoehmApprox a;
    a.kind = Kind::Node;
    a.binders = std::move(binders);
    a.head_bound = true;
    a.head_index = index;
    a.children = std::move(children);
    return a;
  }

  bool is_bottom() const noexcept { return kind == Kind::Bottom; }
  bool same_head(const BoehmApprox& o) const noexcept {
    return head_bound == o.head_bound && (head_bound ? head_index == o.head_index : head_name == o.head_name);
  }

  /// Exact tree equality (binder names ignored, Bottom equals Bottom).
  friend bool operator==(const BoehmApprox& a, const BoehmApprox& b) {
    if (a.kind != b.kind) return false;
    if (a.is_bottom()) return true;
    return a.binders.size() == b.binders.size() && a.same_head(b) && a.children == b.children;
  }
};

/// Depth-bounded Böhm-tree approximant. Every head normal form gets the full
/// `fuel`; siblings do not share it.
inline BoehmApprox approximant(const Term& t, std::size_t depth, std::size_t fuel,
                               std::size_t max_term_size = kHeadSizeCap) {
  if (depth == 0) return BoehmApprox::bottom();
  auto hnf = head_normal_form(t, fuel, max_term_size);
  if (!hnf.solved) return BoehmApprox::bottom(hnf.proven_unsolvable);
  BoehmApprox node;
  node.kind = BoehmApprox::Kind::Node;
  node.binders = hnf.binders;
  if (hnf.head->is_bound()) {
    node.head_bound = true;
    node.head_index = hnf.head->index();
  } else {
    node.head_name = hnf.head->name();
  }
  node.children.reserve(hnf.args.size());
  for (const auto& a : hnf.args) node.children.push_back(approximant(a, depth - 1, fuel, max_term_size));
  return node;
}

/// x^d(Bottom) for a free name x.
inline BoehmApprox spine_approx(const std::string& head, std::size_t depth) {
  BoehmApprox a = BoehmApprox::bottom();
  for (std::size_t i = 0; i < depth; ++i) a = BoehmApprox::free_node(head, {std::move(a)});
  return a;
}

namespace detail {

inline void approx_free_names(const BoehmApprox& a, std::set<std::string>& out) {
  if (a.is_bottom()) return;
  if (!a.head_bound) out.insert(a.head_name);
  for (const auto& c : a.children) approx_free_names(c, out);
}

inline void render_approx(const BoehmApprox& a, std::vector<std::string>& scope, const std::set<std::string>& taken,
                          const std::string& bottom, std::string& out) {
  if (a.is_bottom()) {
    out += bottom;
    return;
  }
  std::size_t pushed = 0;
  if (!a.binders.empty()) {
    out += '\\';
    for (const auto& hint : a.binders) {
      std::string name;
      for (char c : hint) {
        if (c == '^') break;
        name += c;
      }
      if (name.empty()) name = "x";
      auto clash = [&](const std::string& n) {
        return taken.count(n) != 0 || std::find(scope.begin(), scope.end(), n) != scope.end();
      };
      while (clash(name)) name += '\'';
      if (pushed > 0) out += ' ';
      out += name;
      scope.push_back(name);
      ++pushed;
    }
    out += ". ";
  }
  if (a.head_bound) {
    out += a.head_index < scope.size() ? scope[scope.size() - 1 - a.head_index]
                                       : "<" + std::to_string(a.head_index) + ">";
  } else {
    out += a.head_name;
  }
  for (const auto& c : a.children) {
    out += ' ';
    bool atomic = c.is_bottom() || (c.children.empty() && c.binders.empty());
    if (!atomic) out += '(';
    render_approx(c, scope, taken, bottom, out);
    if (!atomic) out += ')';
  }
  scope.resize(scope.size() - pushed);
}

}  // namespace detail

/// Textual rendering, e.g. "x (x ⊥)". With ascii, Bottom prints as "_|_".
inline std::string render(const BoehmApprox& a, bool ascii = false) {
  std::set<std::string> taken;
  detail::approx_free_names(a, taken);
  std::vector<std::string> scope;
  std::string out;
  detail::render_approx(a, scope, taken, ascii ? "_|_" : "⊥", out);
  return out;
}

inline void to_json(json& j, const BoehmApprox& a) {
  if (a.is_bottom()) {
    j = json{{"bottom", true}};
    if (a.unsolvable) j["unsolvable"] = true;
    return;
  }
  j = json{{"binders", a.binders}, {"children", a.children}};
  if (a.head_bound) {
    j["head_index"] = a.head_index;
  } else {
    j["head"] = a.head_name;
  }
}

// ---------------------------------------------------------------------------

struct BtEqResult {
  bool agree = true;
  /// Child indices from the root to the first disagreement.
  std::vector<std::size_t> path;
  /// The disagreement involves no Bottom, so the trees certainly differ.
  bool definitive = false;
  std::size_t depth = 0;
  std::size_t fuel = 0;
};

namespace detail {
inline bool compare_approx(const BoehmApprox& a, const BoehmApprox& b, std::vector<std::size_t>& path,
                           BtEqResult& r) {
  if (a.is_bottom() || b.is_bottom()) {
    if (a.is_bottom() && b.is_bottom()) return true;
    r.definitive = false;
    return false;
  }
  if (a.binders.size() != b.binders.size() || !a.same_head(b) || a.children.size() != b.children.size()) {
    r.definitive = true;
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    path.push_back(i);
    if (!compare_approx(a.children[i], b.children[i], path, r)) return false;
    path.pop_back();
  }
  return true;
}
}  // namespace detail

/// Compares depth-bounded approximants node by node. Bottom matches only
/// Bottom.
inline BtEqResult bt_eq_bounded(const Term& a, const Term& b, std::size_t depth, std::size_t fuel) {
  BtEqResult r;
  r.depth = depth;
  r.fuel = fuel;
  auto ta = approximant(a, depth, fuel);
  auto tb = approximant(b, depth, fuel);
  std::vector<std::size_t> path;
  r.agree = detail::compare_approx(ta, tb, path, r);
  if (!r.agree) r.path = path;
  return r;
}

struct OccursResult {
  bool present = false;
  /// Present: child indices from the root to a node headed by the variable.
  std::vector<std::size_t> path;
  std::size_t depth = 0;
};

/// Shallowest node of the approximant whose head is the free variable z.
inline std::optional<std::vector<std::size_t>> find_free_head(const BoehmApprox& root, const std::string& z) {
  std::deque<std::pair<const BoehmApprox*, std::vector<std::size_t>>> queue;
  queue.emplace_back(&root, std::vector<std::size_t>{});
  while (!queue.empty()) {
    auto [node, path] = std::move(queue.front());
    queue.pop_front();
    if (node->is_bottom()) continue;
    if (!node->head_bound && node->head_name == z) return path;
    for (std::size_t i = 0; i < node->children.size(); ++i) {
      auto p = path;
      p.push_back(i);
      queue.emplace_back(&node->children[i], std::move(p));
    }
  }
  return std::nullopt;
}

/// Looks for z as the head of some node of the depth-bounded approximant.
inline OccursResult occurs_in_approx(const std::string& z, const Term& t, std::size_t depth, std::size_t fuel) {
  OccursResult r;
  r.depth = depth;
  auto tree = approximant(t, depth, fuel);
  if (auto p = find_free_head(tree, z)) {
    r.present = true;
    r.path = std::move(*p);
  }
  return r;
}

}  // namespace fpclab
