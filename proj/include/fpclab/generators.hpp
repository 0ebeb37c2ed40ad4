#pragma once

// Fixed-point-combinator generators: vectors (G0, ..., Gn) acting on a
// combinator Y by application, Y G0 ... Gn.
//
// Every class of generators studied here (constant, weakly constant,
// compact, weakly compact, accretive) is undecidable, so each probe returns a
// three-valued status and never turns an exhausted search into a negative
// claim. Probes report the least modulus k within their bounds; the true
// modulus may be smaller through conversions the search did not reach.

#include <algorithm>
#include <cstddef>
#include <set>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fpclab/boehm.hpp"
#include "fpclab/combinators.hpp"
#include "fpclab/fpc.hpp"
#include "fpclab/reduction.hpp"
#include "fpclab/term.hpp"

namespace fpclab {

struct Generator {
  std::vector<Term> components;
  std::string provenance;

  Generator() = default;
  Generator(std::vector<Term> c, std::string p = {}) : components(std::move(c)), provenance(std::move(p)) {}

  bool trivial() const noexcept { return components.empty(); }
  std::size_t size() const noexcept { return components.size(); }
  const Term& operator[](std::size_t i) const { return components.at(i); }
  const Term& head() const { return components.at(0); }

  /// Syntactic equality of the component lists (up to alpha).
  friend bool operator==(const Generator& a, const Generator& b) { return a.components == b.components; }
};

class GeneratorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::string to_string(const Generator& g) {
  std::string out = "[";
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i > 0) out += "; ";
    out += print(g.components[i]);
  }
  return out + "]";
}

/// Parses "[t0; t1; ...]" (brackets optional); library names are resolved.
inline Generator parse_generator(std::string_view text) {
  std::size_t b = text.find_first_not_of(" \t\r\n");
  std::size_t e = text.find_last_not_of(" \t\r\n");
  if (b == std::string_view::npos) throw ParseError(0, "empty generator literal");
  std::string_view body = text.substr(b, e - b + 1);
  std::size_t offset = b;
  if (body.front() == '[') {
    if (body.back() != ']') throw ParseError(offset + body.size(), "expected ']'");
    body = body.substr(1, body.size() - 2);
    offset += 1;
  }
  Generator g;
  g.provenance = std::string(text.substr(b, e - b + 1));
  if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) return g;
  int nesting = 0;
  std::size_t start = 0;
  auto push = [&](std::size_t end) {
    std::string_view part = body.substr(start, end - start);
    try {
      g.components.push_back(parse_with_library(part));
    } catch (const ParseError& err) {
      throw ParseError(offset + start + err.position(), err.what());
    }
  };
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c == '(') ++nesting;
    if (c == ')') --nesting;
    if (c == ';' && nesting == 0) {
      push(i);
      start = i + 1;
    }
  }
  push(body.size());
  return g;
}

/// Y G0 ... Gn; apply(Y, ()) is Y itself.
inline Term apply(const Term& y, const Generator& g) { return Term::apps(y, g.components); }

/// Concatenation, the monoid operation with () as identity.
inline Generator compose(const Generator& g, const Generator& h) {
  Generator out;
  out.components = g.components;
  out.components.insert(out.components.end(), h.components.begin(), h.components.end());
  if (g.trivial()) {
    out.provenance = h.provenance;
  } else if (h.trivial()) {
    out.provenance = g.provenance;
  } else {
    out.provenance = "(" + g.provenance + ") . (" + h.provenance + ")";
  }
  return out;
}

/// A reserved name not free in any component (nor in `extra`).
inline std::string fresh_for(const Generator& g, const std::string& base, const std::set<std::string>& extra = {}) {
  std::set<std::string> avoid = extra;
  for (const auto& c : g.components) detail::collect_free(c, avoid);
  return fresh_name(base, avoid);
}

/// G0^k(z) G1 ... Gn.
inline Term expansion(const Generator& g, std::size_t k, const std::string& z) {
  if (g.trivial()) throw GeneratorError("expansion of the trivial generator");
  std::vector<Term> rest(g.components.begin() + 1, g.components.end());
  return Term::apps(iterate(g.head(), k, Term::var(z)), rest);
}

/// delta^k(z) G0 ... Gn.
inline Term delta_expansion(const Generator& g, std::size_t k, const std::string& z) {
  return apply(iterate(lib::delta(), k, Term::var(z)), g);
}

// ---------------------------------------------------------------------------
// Probe statuses

/// Outcome of one probe at one modulus k.
enum class KOutcome {
  Holds,     // definitively holds at this k
  Evidence,  // holds up to the explored depth
  Fails,     // definitively fails at this k
  Open,      // nothing decided within bounds
};

inline const char* to_string(KOutcome o) {
  switch (o) {
    case KOutcome::Holds:
      return "holds";
    case KOutcome::Evidence:
      return "evidence";
    case KOutcome::Fails:
      return "fails";
    case KOutcome::Open:
      return "open";
  }
  return "?";
}

struct ProbeStatus {
  enum class Kind { Verified, RefutedUpTo, EvidenceFor, Unknown };

  Kind kind = Kind::Unknown;
  /// Verified / EvidenceFor: the modulus. RefutedUpTo / Unknown: unset.
  std::optional<std::size_t> k;
  std::size_t k_max = 0;
  std::size_t depth = 0;
  Bounds bounds;
  std::optional<Term> witness;
  /// Outcome for k = 0, 1, ... as far as the probe went.
  std::vector<KOutcome> per_k;
  std::string note;

  bool verified() const noexcept { return kind == Kind::Verified; }
  bool refuted() const noexcept { return kind == Kind::RefutedUpTo; }
  bool evidence() const noexcept { return kind == Kind::EvidenceFor; }
  bool unknown() const noexcept { return kind == Kind::Unknown; }
  /// Verified or EvidenceFor.
  bool positive() const noexcept { return verified() || evidence(); }
};

inline const char* to_string(ProbeStatus::Kind k) {
  switch (k) {
    case ProbeStatus::Kind::Verified:
      return "verified";
    case ProbeStatus::Kind::RefutedUpTo:
      return "refuted_up_to";
    case ProbeStatus::Kind::EvidenceFor:
      return "evidence_for";
    case ProbeStatus::Kind::Unknown:
      return "unknown";
  }
  return "?";
}

inline void to_json(json& j, const ProbeStatus& s) {
  j = json{{"status", to_string(s.kind)}, {"k_max", s.k_max}, {"depth", s.depth}, {"bounds", s.bounds}};
  if (s.k) j["k"] = *s.k;
  if (s.witness) j["witness"] = print(*s.witness);
  json per = json::array();
  for (auto o : s.per_k) per.push_back(to_string(o));
  j["per_k"] = per;
  if (!s.note.empty()) j["note"] = s.note;
}

struct ProbeConfig {
  std::size_t k_max = 3;
  std::size_t depth = 6;
  Bounds bounds;
};

namespace detail {
inline ProbeStatus make_status(const ProbeConfig& cfg) {
  ProbeStatus s;
  s.k_max = cfg.k_max;
  s.depth = cfg.depth;
  s.bounds = cfg.bounds;
  return s;
}
}  // namespace detail

/// Searches the reduct graph of G0^k(z) G1...Gn, k = 0..k_max, for a term
/// without z. A hit verifies constancy with that modulus.
inline ProbeStatus probe_constant(const Generator& g, const ProbeConfig& cfg) {
  ProbeStatus s = detail::make_status(cfg);
  std::string z = fresh_for(g, "z");
  for (std::size_t k = 0; k <= cfg.k_max; ++k) {
    Term e = expansion(g, k, z);
    // First z-free term on the normal-order lane, else anywhere in the reduct set.
    auto lane = normalize(e, cfg.bounds);
    std::optional<Term> hit;
    Term cur = e;
    for (std::size_t i = 0; !hit; ++i) {
      if (!occurs_free(z, cur)) hit = cur;
      if (i == lane.path.size()) break;
      cur = step(cur, lane.path[i]);
    }
    if (!hit) {
      auto graph = reduct_set(e, cfg.bounds);
      for (const auto& n : graph.nodes) {
        if (!occurs_free(z, n)) {
          hit = n;
          break;
        }
      }
    }
    if (hit) {
      s.per_k.push_back(KOutcome::Holds);
      s.kind = ProbeStatus::Kind::Verified;
      s.k = k;
      s.witness = *hit;
      return s;
    }
    s.per_k.push_back(KOutcome::Open);
  }
  s.note = "no z-free reduct found; constancy is only semi-decidable";
  return s;
}

/// z absent from the approximant of G0^k(z) G1...Gn x is evidence of weak
/// constancy at k; z present refutes it at k.
inline ProbeStatus probe_weakly_constant(const Generator& g, const ProbeConfig& cfg) {
  ProbeStatus s = detail::make_status(cfg);
  std::string z = fresh_for(g, "z");
  std::string x = fresh_for(g, "x", {z});
  for (std::size_t k = 0; k <= cfg.k_max; ++k) {
    Term e = Term::app(expansion(g, k, z), Term::var(x));
    auto occ = occurs_in_approx(z, e, cfg.depth, cfg.bounds.max_steps);
    s.per_k.push_back(occ.present ? KOutcome::Fails : KOutcome::Evidence);
    if (!occ.present && !s.k) s.k = k;
  }
  if (s.k) {
    s.kind = ProbeStatus::Kind::EvidenceFor;
  } else {
    s.kind = ProbeStatus::Kind::RefutedUpTo;
    s.note = "z occurs in the approximant for every k <= k_max";
  }
  return s;
}

/// is_fpc_bounded on G0^k(z) G1...Gn; stops at the first verified k.
inline ProbeStatus probe_compact(const Generator& g, const ProbeConfig& cfg) {
  ProbeStatus s = detail::make_status(cfg);
  std::string z = fresh_for(g, "z");
  bool all_refuted = true;
  for (std::size_t k = 0; k <= cfg.k_max; ++k) {
    Term e = expansion(g, k, z);
    auto v = is_fpc_bounded(e, cfg.bounds);
    if (v.verified()) {
      s.per_k.push_back(KOutcome::Holds);
      s.kind = ProbeStatus::Kind::Verified;
      s.k = k;
      s.witness = e;
      return s;
    }
    s.per_k.push_back(v.refuted() ? KOutcome::Fails : KOutcome::Open);
    all_refuted = all_refuted && v.refuted();
  }
  s.kind = all_refuted ? ProbeStatus::Kind::RefutedUpTo : ProbeStatus::Kind::Unknown;
  return s;
}

/// is_wfpc_bounded on G0^k(z) G1...Gn for every k <= k_max.
inline ProbeStatus probe_weakly_compact(const Generator& g, const ProbeConfig& cfg) {
  ProbeStatus s = detail::make_status(cfg);
  std::string z = fresh_for(g, "z");
  bool all_refuted = true;
  for (std::size_t k = 0; k <= cfg.k_max; ++k) {
    Term e = expansion(g, k, z);
    auto v = is_wfpc_bounded(e, cfg.depth, cfg.bounds.max_steps);
    KOutcome o = v.verified() ? KOutcome::Evidence : v.refuted() ? KOutcome::Fails : KOutcome::Open;
    s.per_k.push_back(o);
    if (o == KOutcome::Evidence && !s.k) {
      s.k = k;
      s.witness = e;
    }
    all_refuted = all_refuted && v.refuted();
  }
  if (s.k) {
    s.kind = ProbeStatus::Kind::EvidenceFor;
  } else {
    s.kind = all_refuted ? ProbeStatus::Kind::RefutedUpTo : ProbeStatus::Kind::Unknown;
  }
  return s;
}

/// Accretivity: z present in the approximant of delta^k(z) G0...Gn x for
/// every k <= k_max is evidence; verified compactness (which implies weak
/// compactness) refutes it.
inline ProbeStatus probe_accretive(const Generator& g, const ProbeConfig& cfg,
                                   const std::optional<ProbeStatus>& compact = std::nullopt) {
  ProbeStatus s = detail::make_status(cfg);
  std::string z = fresh_for(g, "z");
  std::string x = fresh_for(g, "x", {z});
  bool all_present = true;
  for (std::size_t k = 0; k <= cfg.k_max; ++k) {
    Term e = Term::app(delta_expansion(g, k, z), Term::var(x));
    auto occ = occurs_in_approx(z, e, cfg.depth, cfg.bounds.max_steps);
    s.per_k.push_back(occ.present ? KOutcome::Holds : KOutcome::Open);
    all_present = all_present && occ.present;
  }
  ProbeStatus c = compact ? *compact : (g.trivial() ? ProbeStatus{} : probe_compact(g, cfg));
  if (c.verified()) {
    s.kind = ProbeStatus::Kind::RefutedUpTo;
    s.k = c.k;
    s.note = "compact with modulus " + std::to_string(*c.k) + ", hence weakly compact";
  } else if (all_present) {
    s.kind = ProbeStatus::Kind::EvidenceFor;
    s.k = cfg.k_max;
  } else {
    s.kind = ProbeStatus::Kind::Unknown;
  }
  return s;
}

struct ClassificationReport {
  Generator generator;
  ProbeConfig config;
  ProbeStatus constant;
  ProbeStatus weakly_constant;
  ProbeStatus compact;
  ProbeStatus weakly_compact;
  ProbeStatus accretive;
  /// Human-readable descriptions of contradictory definitive statuses.
  std::vector<std::string> conflicts;

  bool consistent() const noexcept { return conflicts.empty(); }
};

/// Weakly constant and weakly compact coincide for every k; flags any k
/// where one probe is positive while the other definitively fails.
inline std::vector<std::string> weak_class_conflicts(const ProbeStatus& wconst, const ProbeStatus& wcompact) {
  std::vector<std::string> out;
  std::size_t n = std::min(wconst.per_k.size(), wcompact.per_k.size());
  auto positive = [](KOutcome o) { return o == KOutcome::Holds || o == KOutcome::Evidence; };
  for (std::size_t k = 0; k < n; ++k) {
    KOutcome a = wconst.per_k[k], b = wcompact.per_k[k];
    if ((positive(a) && b == KOutcome::Fails) || (positive(b) && a == KOutcome::Fails))
      out.push_back("k=" + std::to_string(k) + ": weakly_constant " + to_string(a) + " vs weakly_compact " +
                    to_string(b));
  }
  return out;
}

inline ClassificationReport classify(const Generator& g, const ProbeConfig& cfg) {
  if (g.trivial()) throw GeneratorError("classification of the trivial generator");
  ClassificationReport r;
  r.generator = g;
  r.config = cfg;
  r.constant = probe_constant(g, cfg);
  r.weakly_constant = probe_weakly_constant(g, cfg);
  r.compact = probe_compact(g, cfg);
  r.weakly_compact = probe_weakly_compact(g, cfg);
  r.accretive = probe_accretive(g, cfg, r.compact);

  // A z-free reduct proves z absent from the Böhm tree, and an fpc is a wfpc.
  auto upgrade = [](ProbeStatus& weak, const ProbeStatus& strong) {
    if (!strong.verified()) return;
    std::size_t k = *strong.k;
    if (weak.per_k.size() > k) weak.per_k[k] = KOutcome::Holds;
    if (!(weak.evidence() && weak.k && *weak.k < k)) {
      weak.kind = ProbeStatus::Kind::Verified;
      weak.k = k;
      weak.witness = strong.witness;
    }
  };
  upgrade(r.weakly_constant, r.constant);
  upgrade(r.weakly_compact, r.compact);

  r.conflicts = weak_class_conflicts(r.weakly_constant, r.weakly_compact);
  if (r.accretive.evidence() && r.weakly_compact.positive() && r.weakly_compact.k &&
      *r.weakly_compact.k <= cfg.k_max)
    r.conflicts.push_back("accretive evidence for all k <= k_max alongside weak compactness at k=" +
                          std::to_string(*r.weakly_compact.k));
  return r;
}

inline void to_json(json& j, const ClassificationReport& r) {
  j = json{{"generator", to_string(r.generator)},
           {"k_max", r.config.k_max},
           {"depth", r.config.depth},
           {"bounds", r.config.bounds},
           {"constant", r.constant},
           {"weakly_constant", r.weakly_constant},
           {"compact", r.compact},
           {"weakly_compact", r.weakly_compact},
           {"accretive", r.accretive},
           {"conflicts", r.conflicts}};
}

// ---------------------------------------------------------------------------
// Fixed points of generators

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FixedPointCertificate {
  enum class Path { Compact, Weak };

  Generator generator;
  Path path = Path::Compact;
  std::size_t k = 0;
  /// The hole variable of F0[z] and Fk[z].
  std::string hole;
  Term f0;
  Term fk;
  Term y;
  Term x;
  /// apply(X, G) against X.
  JoinVerdict join;
  /// The computation X G = G0^k(Fk[Y G0] G0) G1...Gn = G0^k(Y G0) G1...Gn = X,
  /// each link checked separately.
  std::vector<Term> chain;
  std::vector<JoinVerdict> chain_joins;
  Bounds bounds;

  bool chain_complete() const {
    return !chain_joins.empty() &&
           std::all_of(chain_joins.begin(), chain_joins.end(), [](const JoinVerdict& v) { return v.joined(); });
  }
  /// The direct join succeeded, or every link of the chain did.
  bool complete() const { return join.joined() || chain_complete(); }
};

namespace detail {

struct FixedPointParts {
  FixedPointCertificate::Path path;
  std::size_t k;
  std::string hole;
  Term f0;
  Term fk;
  Term y;
  Term x;
};

inline FixedPointParts build_fixed_point(const Generator& g, FixedPointCertificate::Path path, std::size_t k,
                                         std::size_t fuel) {
  std::string z = fresh_for(g, "z");
  Term f0 = expansion(g, k, z);
  Term fk = f0;
  if (path == FixedPointCertificate::Path::Weak) {
    for (std::size_t i = 0; i < k; ++i) fk = unfold_wfpc(fk, fuel);
  }
  std::string yv = fresh_for(g, "y", {z});
  Term y_g0 = Term::app(Term::var(yv), g.head());
  Term y = Term::app(lib::Theta(), Term::lam(yv, substitute(fk, z, y_g0)));
  Term x = substitute(f0, z, Term::app(y, g.head()));
  return {path, k, z, f0, fk, y, x};
}

}  // namespace detail

/// Builds a fixed point X of G (X G = X). Compact generators use F_k = F_0;
/// weakly compact ones extract F_k by unfolding F_0[z] k times with z inert.
/// Then Y := Theta (\y. F_k[y G0]) and X := F_0[Y G0].
inline FixedPointCertificate construct_fixed_point(const Generator& g, const Bounds& bounds,
                                                   const ProbeConfig& probe = {}) {
  if (g.trivial()) throw PreconditionError("the trivial generator fixes everything");
  ProbeConfig cfg = probe;
  cfg.bounds = bounds;
  auto path = FixedPointCertificate::Path::Compact;
  std::size_t k = 0;
  auto compact = probe_compact(g, cfg);
  if (compact.verified()) {
    k = *compact.k;
  } else {
    auto weak = probe_weakly_compact(g, cfg);
    if (!weak.positive()) throw PreconditionError("no compactness modulus found within k <= " + std::to_string(cfg.k_max));
    path = FixedPointCertificate::Path::Weak;
    k = *weak.k;
  }
  auto parts = detail::build_fixed_point(g, path, k, bounds.max_steps);
  FixedPointCertificate c{.generator = g,
                          .path = path,
                          .k = k,
                          .hole = parts.hole,
                          .f0 = parts.f0,
                          .fk = parts.fk,
                          .y = parts.y,
                          .x = parts.x,
                          .join = {},
                          .chain = {},
                          .chain_joins = {},
                          .bounds = bounds};
  c.join = join_bounded(apply(c.x, g), c.x, bounds);

  std::vector<Term> rest(g.components.begin() + 1, g.components.end());
  Term y_g0 = Term::app(c.y, g.head());
  Term unfolded = Term::apps(iterate(g.head(), c.k, Term::app(substitute(c.fk, c.hole, y_g0), g.head())), rest);
  c.chain = {apply(c.x, g), unfolded, Term::apps(iterate(g.head(), c.k, y_g0), rest), c.x};
  for (std::size_t i = 0; i + 1 < c.chain.size(); ++i)
    c.chain_joins.push_back(join_bounded(c.chain[i], c.chain[i + 1], bounds));
  return c;
}

inline void to_json(json& j, const FixedPointCertificate& c) {
  json chain = json::array();
  for (std::size_t i = 0; i < c.chain_joins.size(); ++i)
    chain.push_back(json{{"from", print(c.chain[i])}, {"to", print(c.chain[i + 1])}, {"join", c.chain_joins[i]}});
  j = json{{"generator", to_string(c.generator)},
           {"path", c.path == FixedPointCertificate::Path::Compact ? "compact" : "weak"},
           {"k", c.k},
           {"hole", c.hole},
           {"F0", print(c.f0)},
           {"Fk", print(c.fk)},
           {"Y", print(c.y)},
           {"X", print(c.x)},
           {"join", c.join},
           {"chain", chain},
           {"complete", c.complete()}};
}

// ---------------------------------------------------------------------------
// Sample fpcs and extensional behaviour

/// The fixed battery of fpcs used for "for every fpc" checks: Theta,
/// Y_curry, Theta_I, Theta_K and the fixed point of (\y. Theta_y).
inline std::vector<Term> default_samples(bool include_constructed = true) {
  std::vector<Term> s = {lib::Theta(), lib::Y_curry(), theta_param(lib::I()), theta_param(lib::K())};
  if (include_constructed) {
    Term y = Term::var("y");
    Generator g({Term::lam("y", theta_param(y))}, "[\\y. Theta_y]");
    s.push_back(detail::build_fixed_point(g, FixedPointCertificate::Path::Compact, 1, 0).x);
  }
  return s;
}

struct SampleCheck {
  Term sample;
  FpcVerdict fpc;
  FpcVerdict wfpc;
};

struct FgvEvidence {
  std::vector<SampleCheck> checks;
  /// One wfpc-verified image suffices for the weak generator property.
  bool wfgv_established = false;
  /// Every image fpc-verified; evidence only, the property quantifies over all fpcs.
  bool fgv_evidence = false;
  bool any_refuted = false;
};

inline FgvEvidence is_fgv_evidence(const Generator& g, const std::vector<Term>& samples, const Bounds& bounds,
                                   std::size_t depth = 6) {
  if (samples.empty()) throw std::invalid_argument("is_fgv_evidence needs at least one sample fpc");
  FgvEvidence r;
  r.fgv_evidence = true;
  for (const auto& y : samples) {
    Term img = apply(y, g);
    SampleCheck c{y, is_fpc_bounded(img, bounds), is_wfpc_bounded(img, depth, bounds.max_steps)};
    r.wfgv_established = r.wfgv_established || c.wfpc.verified();
    r.fgv_evidence = r.fgv_evidence && c.fpc.verified();
    r.any_refuted = r.any_refuted || c.fpc.refuted() || c.wfpc.refuted();
    r.checks.push_back(std::move(c));
  }
  return r;
}

struct ExtEqReport {
  std::vector<JoinVerdict> joins;
  /// Every sample joined: evidence of extensional equality on the battery.
  bool all_joined = false;
  /// Some sample has distinct normal forms: definitely not extensionally equal.
  bool distinct = false;
};

inline ExtEqReport ext_eq_bounded(const Generator& g, const Generator& h, const std::vector<Term>& samples,
                                  const Bounds& bounds) {
  ExtEqReport r;
  r.all_joined = !samples.empty();
  for (const auto& y : samples) {
    r.joins.push_back(join_bounded(apply(y, g), apply(y, h), bounds));
    r.all_joined = r.all_joined && r.joins.back().joined();
    r.distinct = r.distinct || r.joins.back().refuted();
  }
  return r;
}

inline void to_json(json& j, const ExtEqReport& r) {
  j = json{{"all_joined", r.all_joined}, {"distinct", r.distinct}, {"joins", r.joins},
           {"note", "samples cover finitely many fpcs; agreement is evidence only"}};
}

// ---------------------------------------------------------------------------
// Absorbers

/// Left absorber of a weakly compact G: F = (A, B) with
///   A = \y b. b (y delta),
///   B = \y. F0[z := y (\u. Fk[z := u G0]) G0],
/// so that F G and F agree on every fpc.
inline Generator left_absorber(const FixedPointCertificate& cert) {
  const Generator& g = cert.generator;
  Term a = parse_with_library("\\y b. b (y DELTA)");
  std::string u = fresh_for(g, "u", {cert.hole});
  std::string y = fresh_for(g, "y", {cert.hole, u});
  Term inner = Term::lam(u, substitute(cert.fk, cert.hole, Term::app(Term::var(u), g.head())));
  Term b = Term::lam(y, substitute(cert.f0, cert.hole, Term::apps(Term::var(y), {inner, g.head()})));
  return Generator({a, b}, "left absorber of " + to_string(g));
}

struct RightAbsorber {
  Generator generator;
  /// Binder position of the head variable of F0's head normal form.
  std::size_t m = 0;
  /// Number of binders after the first one.
  std::size_t l = 0;
  /// Indices i of G_i filled with the placeholder \p. p.
  std::vector<std::size_t> placeholders;
  /// Free variable standing for the first binder of F0 inside G_m.
  std::string v0;
};

/// Right absorber of F = (F0, ..., Fn), n >= 1: G = (F0, G1, ..., G_{n+1})
/// with
///   G_m     = \p1..pr g_{l+1}..g_{n+1}. Theta_{G_{n+1} (F0 v0 F1 ... Fn)},
///   G_{n+1} = Theta (\g y. g (y F)),
/// where F0 has head normal form \v0..vl. v_m p1..pr, and every other G_i is
/// \p. p.
inline RightAbsorber right_absorber(const Generator& f, std::size_t fuel = 500) {
  if (f.size() < 2) throw PreconditionError("right absorber needs a generator with at least two components");
  std::size_t n = f.size() - 1;
  auto hnf = head_normal_form(f.head(), fuel);
  if (!hnf.solved) throw PreconditionError("first component has no head normal form within fuel");
  if (hnf.binders.empty() || !hnf.head->is_bound() || hnf.head->index() >= hnf.binders.size())
    throw PreconditionError("head variable of the first component must be one of its binders");
  std::size_t l = hnf.binders.size() - 1;
  std::size_t m = l - hnf.head->index();
  if (m == 0) throw PreconditionError("head variable of the first component is its first binder");
  if (l > n + 1) throw PreconditionError("first component takes more arguments than the absorber supplies");
  if (m == n + 1) throw PreconditionError("head position collides with the last absorber component");

  RightAbsorber r;
  r.m = m;
  r.l = l;
  r.v0 = fresh_for(f, "v0");

  std::string g = fresh_for(f, "g"), y = fresh_for(f, "y", {g});
  Term step = Term::lam(g, Term::lam(y, Term::app(Term::var(g), apply(Term::var(y), f))));
  Term last = Term::app(lib::Theta(), step);

  std::vector<Term> fs(f.components.begin() + 1, f.components.end());
  Term image = Term::apps(Term::app(f.head(), Term::var(r.v0)), fs);
  Term gm = theta_param(Term::app(last, image));
  std::size_t arity = hnf.args.size() + (n + 1 - l);
  for (std::size_t i = 0; i < arity; ++i) gm = Term::lam_nameless(i < (n + 1 - l) ? "g" : "p", gm);

  std::vector<Term> comps = {f.head()};
  for (std::size_t i = 1; i <= n + 1; ++i) {
    if (i == m) {
      comps.push_back(gm);
    } else if (i == n + 1) {
      comps.push_back(last);
    } else {
      comps.push_back(lib::I());
      r.placeholders.push_back(i);
    }
  }
  r.generator = Generator(std::move(comps), "right absorber of " + to_string(f));
  return r;
}

struct AbsorberCheck {
  std::vector<JoinVerdict> joins;
  bool all_joined = false;
};

namespace detail {
inline AbsorberCheck check_pairs(const std::vector<std::pair<Term, Term>>& pairs, const Bounds& bounds) {
  AbsorberCheck r;
  r.all_joined = !pairs.empty();
  for (const auto& [a, b] : pairs) {
    r.joins.push_back(join_bounded(a, b, bounds));
    r.all_joined = r.all_joined && r.joins.back().joined();
  }
  return r;
}
}  // namespace detail

/// Y F G against Y F for each sample (F a left absorber of G).
inline AbsorberCheck check_left_absorber(const Generator& f, const Generator& g, const std::vector<Term>& samples,
                                         const Bounds& bounds) {
  std::vector<std::pair<Term, Term>> pairs;
  for (const auto& y : samples) pairs.emplace_back(apply(apply(y, f), g), apply(y, f));
  return detail::check_pairs(pairs, bounds);
}

/// Y G against Y F G for each sample (G a right absorber of F).
inline AbsorberCheck check_right_absorber(const Generator& f, const Generator& g, const std::vector<Term>& samples,
                                          const Bounds& bounds) {
  std::vector<std::pair<Term, Term>> pairs;
  for (const auto& y : samples) pairs.emplace_back(apply(y, g), apply(apply(y, f), g));
  return detail::check_pairs(pairs, bounds);
}

// ---------------------------------------------------------------------------
// Non-injectivity and zerosum-freeness

struct NoninjectivityWitness {
  Generator generator;
  std::vector<Term> args;
  /// \x. Theta_{x P} x and \x. Theta_{x P I} x.
  Term y;
  Term y_prime;
  FpcVerdict y_fpc;
  FpcVerdict y_prime_fpc;
  JoinVerdict images;
  JoinVerdict preimages;

  /// Both fpcs, equal images, and no join of the preimages within bounds.
  bool holds() const { return y_fpc.verified() && y_prime_fpc.verified() && images.joined() && !preimages.joined(); }
};

/// Two fpcs identified by G = (G0, ...) when G0 P ->> I: Y = \x. Theta_{x P} x
/// and Y' = \x. Theta_{x P I} x. Defaults to G = (delta), P = (K I, I).
inline NoninjectivityWitness noninjectivity_witness(const Bounds& bounds, const Generator& g = Generator({lib::delta()}, "[delta]"),
                                                    const std::vector<Term>& args = {Term::app(lib::K(), lib::I()),
                                                                                     lib::I()}) {
  if (g.trivial()) throw GeneratorError("the trivial generator is injective");
  std::string x = fresh_for(g, "x");
  Term xp = Term::apps(Term::var(x), args);
  NoninjectivityWitness w{.generator = g,
                          .args = args,
                          .y = Term::lam(x, Term::app(theta_param(xp), Term::var(x))),
                          .y_prime = Term::lam(x, Term::app(theta_param(Term::app(xp, lib::I())), Term::var(x))),
                          .y_fpc = {},
                          .y_prime_fpc = {},
                          .images = {},
                          .preimages = {}};
  w.y_fpc = is_fpc_bounded(w.y, bounds);
  w.y_prime_fpc = is_fpc_bounded(w.y_prime, bounds);
  w.images = join_bounded(apply(w.y, g), apply(w.y_prime, g), bounds);
  w.preimages = join_bounded(w.y, w.y_prime, bounds);
  return w;
}

struct ZerosumReport {
  std::vector<Generator> compositions;
  /// Per composition: Y (G . H) joined Y for every sample.
  std::vector<bool> identity_on_samples;
  /// Y delta = Y' delta with Y, Y' apart, so (delta) . H is never the identity.
  bool separation_witnessed = false;

  bool consistent() const {
    return std::none_of(identity_on_samples.begin(), identity_on_samples.end(), [](bool b) { return b; });
  }
};

/// Composes every ordered pair of the given non-trivial generators and checks
/// that none acts as the identity on the samples.
inline ZerosumReport zerosum_check(const std::vector<Generator>& gens, const std::vector<Term>& samples,
                                   const Bounds& bounds) {
  ZerosumReport r;
  for (const auto& g : gens) {
    for (const auto& h : gens) {
      if (g.trivial() || h.trivial()) continue;
      Generator c = compose(g, h);
      bool identity = !samples.empty();
      for (const auto& y : samples) {
        if (!join_bounded(apply(y, c), y, bounds).joined()) {
          identity = false;
          break;
        }
      }
      r.compositions.push_back(std::move(c));
      r.identity_on_samples.push_back(identity);
    }
  }
  r.separation_witnessed = noninjectivity_witness(bounds).holds();
  return r;
}

}  // namespace fpclab
