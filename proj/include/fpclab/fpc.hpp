#pragma once

// Bounded fpc / weak-fpc verdicts and the unfolding of weak fpcs.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpclab/boehm.hpp"
#include "fpclab/reduction.hpp"
#include "fpclab/term.hpp"

namespace fpclab {

/// Three-valued outcome of a bounded semi-decision.
enum class Verdict { Verified, Refuted, Unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Verified:
      return "verified";
    case Verdict::Refuted:
      return "refuted";
    case Verdict::Unknown:
      return "unknown";
  }
  return "?";
}

struct FpcVerdict {
  Verdict verdict = Verdict::Unknown;
  /// The fresh variable x^ used for Y x^ = x^ (Y x^).
  std::string var;
  /// fpc checks: the underlying conversion search.
  std::optional<JoinVerdict> join;
  /// wfpc checks: the approximant of Y x^ and the first mismatching node.
  std::optional<BoehmApprox> approx;
  std::vector<std::size_t> mismatch_path;
  std::size_t depth = 0;
  std::size_t fuel = 0;

  bool verified() const noexcept { return verdict == Verdict::Verified; }
  bool refuted() const noexcept { return verdict == Verdict::Refuted; }
  bool unknown() const noexcept { return verdict == Verdict::Unknown; }
};

inline void to_json(json& j, const FpcVerdict& v) {
  j = json{{"verdict", to_string(v.verdict)}, {"var", v.var}};
  if (v.join) j["join"] = *v.join;
  if (v.approx) {
    j["approximant"] = render(*v.approx);
    j["depth"] = v.depth;
    j["fuel"] = v.fuel;
    if (!v.mismatch_path.empty() || v.refuted()) j["mismatch_path"] = v.mismatch_path;
  }
}

/// Y x^ joined with x^ (Y x^) under bounds; two distinct normal forms refute.
inline FpcVerdict is_fpc_bounded(const Term& y, const Bounds& bounds) {
  FpcVerdict r;
  r.var = fresh_name("x", {&y});
  Term x = Term::var(r.var);
  Term lhs = Term::app(y, x);
  Term rhs = Term::app(x, lhs);
  r.join = join_bounded(lhs, rhs, bounds);
  r.verdict = r.join->joined() ? Verdict::Verified : r.join->refuted() ? Verdict::Refuted : Verdict::Unknown;
  return r;
}

/// Checks the approximant of Y x^ against x^(x^(...x^(Bottom))) to `depth`.
///
/// A node with other binders, another head or another arity refutes, and so
/// does a Bottom whose head reduction provably cycles. A Bottom caused by
/// fuel exhaustion gives Unknown.
inline FpcVerdict is_wfpc_bounded(const Term& y, std::size_t depth, std::size_t fuel) {
  FpcVerdict r;
  r.var = fresh_name("x", {&y});
  r.depth = depth;
  r.fuel = fuel;
  r.approx = approximant(Term::app(y, Term::var(r.var)), depth, fuel);
  const BoehmApprox* node = &*r.approx;
  for (std::size_t level = 0; level < depth; ++level) {
    if (node->is_bottom()) {
      r.mismatch_path.assign(level, 0);
      r.verdict = node->unsolvable ? Verdict::Refuted : Verdict::Unknown;
      return r;
    }
    if (!node->binders.empty() || node->head_bound || node->head_name != r.var || node->children.size() != 1) {
      r.mismatch_path.assign(level, 0);
      r.verdict = Verdict::Refuted;
      return r;
    }
    node = &node->children.front();
  }
  r.verdict = Verdict::Verified;
  return r;
}

class UnfoldError : public std::runtime_error {
 public:
  enum class Reason { Shape, Fuel };
  UnfoldError(Reason reason, const std::string& message) : std::runtime_error(message), reason_(reason) {}
  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

/// Next stage of a weak fpc: when Y x^ has head normal form x^ N, returns
/// \x^. N, so that Y x^ = x^ (unfold_wfpc(Y) x^).
inline Term unfold_wfpc(const Term& y, std::size_t fuel) {
  std::string x = fresh_name("x", {&y});
  auto hnf = head_normal_form(Term::app(y, Term::var(x)), fuel);
  if (!hnf.solved) throw UnfoldError(UnfoldError::Reason::Fuel, "no head normal form within fuel " + std::to_string(fuel));
  if (!hnf.binders.empty() || !hnf.head->is_var() || hnf.head->name() != x || hnf.args.size() != 1)
    throw UnfoldError(UnfoldError::Reason::Shape, "head normal form is not " + x + " applied to one argument: " +
                                                      print(*hnf.last));
  Term stage = Term::lam(x, hnf.args.front());
  return Term::lam_nameless("x", stage.body());
}

}  // namespace fpclab
