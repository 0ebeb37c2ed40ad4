#pragma once

// Named combinators and the parameterized fixed-point constructions.
//
// Recursive equations (Q y z = z (y Q z) and friends) are realized by
// Turing-style self-application, so each equation holds by reduction from
// left to right rather than merely up to conversion.

#include <cctype>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fpclab/term.hpp"

namespace fpclab {

class UnknownCombinator : public std::invalid_argument {
 public:
  explicit UnknownCombinator(const std::string& name) : std::invalid_argument("unknown combinator '" + name + "'") {}
};

namespace lib {

inline Term parse_lib(std::string_view text) { return parse(text); }

inline const Term& I() {
  static const Term t = parse_lib("\\x. x");
  return t;
}
inline const Term& K() {
  static const Term t = parse_lib("\\x y. x");
  return t;
}
inline const Term& C() {
  static const Term t = parse_lib("\\f x y. f y x");
  return t;
}
/// \x y. x^k(y)
inline Term C_k(std::size_t k) {
  return Term::lam("x", Term::lam("y", iterate(Term::var("x"), k, Term::var("y"))));
}
inline const Term& Omega() {
  static const Term t = parse_lib("(\\x. x x) (\\x. x x)");
  return t;
}
inline const Term& delta() {
  static const Term t = parse_lib("\\y x. x (y x)");
  return t;
}
inline const Term& Y_curry() {
  static const Term t = parse_lib("\\f. (\\x. f (x x)) (\\x. f (x x))");
  return t;
}
/// Turing's V = \v x. x (v v x).
inline const Term& V() {
  static const Term t = parse_lib("\\v x. x (v v x)");
  return t;
}
inline const Term& Theta() {
  static const Term t = Term::app(V(), V());
  return t;
}
/// \v m x. x (v v m x), the parameterized variant of V.
inline const Term& V_param() {
  static const Term t = parse_lib("\\v m x. x (v v m x)");
  return t;
}
/// \y. Theta_y, the single-term generator whose images are Theta_{Y G}.
inline const Term& Theta_gen() {
  static const Term t = Term::lam_nameless("y", Term::apps(V_param(), {V_param(), Term::bound(0)}));
  return t;
}
inline const Term& P() {
  static const Term t = parse_lib("\\x y. y x");
  return t;
}
/// Q = B B with B = \b y z. z (y (b b) z), so Q y z ->> z (y Q z).
inline const Term& Q() {
  static const Term b = parse_lib("\\b y z. z (y (b b) z)");
  static const Term t = Term::app(b, b);
  return t;
}
inline const Term& W_pr() {
  static const Term t = parse_lib("\\w p z. z (w w (z p) z)");
  return t;
}
/// R y z = W W (y Q z) z.
inline const Term& R() {
  static const Term t = Term::lam(
      "y", Term::lam("z", Term::apps(W_pr(), {W_pr(), Term::apps(Term::var("y"), {Q(), Term::var("z")}),
                                              Term::var("z")})));
  return t;
}
/// G y z = z (y (C z)) (delta (y (C z))).
inline const Term& G_ck() {
  static const Term t = [] {
    Term y_cz = Term::app(Term::var("y"), Term::app(C(), Term::var("z")));
    return Term::lam("y", Term::lam("z", Term::apps(Term::var("z"), {y_cz, Term::app(delta(), y_cz)})));
  }();
  return t;
}
/// [p, q] = \z. z p q.
inline Term pair(const Term& p, const Term& q) {
  std::string z = fresh_name("z", {&p, &q});
  return Term::lam(z, Term::apps(Term::var(z), {p, q}));
}
inline const Term& pair_combinator() {
  static const Term t = parse_lib("\\p q z. z p q");
  return t;
}
/// \y x. x (y (K [y, x]) I).
inline const Term& G_bracket() {
  static const Term t = [] {
    Term y = Term::var("y"), x = Term::var("x");
    Term inner = Term::apps(y, {Term::app(K(), pair(y, x)), I()});
    return Term::lam("y", Term::lam("x", Term::app(x, inner)));
  }();
  return t;
}

}  // namespace lib

/// Theta_M = V' V' M, so Theta_M x ->> x (Theta_M x).
inline Term theta_param(const Term& m) { return Term::apps(lib::V_param(), {lib::V_param(), m}); }

/// W_z = \w p x. x (w w (z p) x).
inline Term psi_builder(const std::string& z) {
  return Term::lam("w", Term::lam("p", Term::lam("x", Term::app(Term::var("x"), Term::apps(Term::var("w"), {
                                                                    Term::var("w"),
                                                                    Term::app(Term::var(z), Term::var("p")),
                                                                    Term::var("x"),
                                                                })))));
}

/// Psi_z = W_z W_z I: a weak fpc that is not an fpc.
inline Term psi(const std::string& z) {
  Term w = psi_builder(z);
  return Term::apps(w, {w, lib::I()});
}

/// V_x = \p v. x (v (c p) v), with x and c free.
inline Term upsilon_builder(const Term& x, const std::string& c) {
  return Term::lam("p", Term::lam("v", Term::app(x, Term::apps(Term::var("v"), {
                                                        Term::app(Term::var(c), Term::var("p")),
                                                        Term::var("v"),
                                                    }))));
}

/// Upsilon = \x. V_x I V_x. Its reduction graph on an argument is a single path.
inline Term upsilon(const std::string& c) {
  std::string x = c == "x" ? "x'" : "x";
  Term vx = upsilon_builder(Term::var(x), c);
  return Term::lam(x, Term::apps(vx, {lib::I(), vx}));
}

/// Upsilon^k_x = V_x c^k(I) V_x.
inline Term upsilon_stage(const Term& x, const std::string& c, std::size_t k) {
  Term vx = upsilon_builder(x, c);
  return Term::apps(vx, {iterate(Term::var(c), k, lib::I()), vx});
}

// ---------------------------------------------------------------------------
// Name lookup

inline const std::vector<std::string>& combinator_names() {
  static const std::vector<std::string> names = {"I",     "K", "C", "C_k", "Omega", "delta", "Y_curry", "Theta", "V", "V_param", "Theta_gen",
                                                 "P",     "Q", "W_pr", "R", "G_ck", "G_bracket", "pair", "Psi", "Upsilon"};
  return names;
}

namespace detail {

inline std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

inline std::optional<Term> lookup_combinator(std::string_view raw) {
  std::string n = upper(raw);
  if (n.size() > 2 && n[0] == 'C' && n[1] == '_') {
    std::string digits = n.substr(2);
    if (!digits.empty() && digits.size() < 6 &&
        std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      return lib::C_k(std::stoul(digits));
    return std::nullopt;
  }
  static const std::map<std::string, const Term* (*)()> table = {
      {"I", [] { return &lib::I(); }},
      {"K", [] { return &lib::K(); }},
      {"C", [] { return &lib::C(); }},
      {"OMEGA", [] { return &lib::Omega(); }},
      {"DELTA", [] { return &lib::delta(); }},
      {"Y", [] { return &lib::Y_curry(); }},
      {"Y_CURRY", [] { return &lib::Y_curry(); }},
      {"THETA", [] { return &lib::Theta(); }},
      {"V", [] { return &lib::V(); }},
      {"V_PARAM", [] { return &lib::V_param(); }},
      {"THETA_GEN", [] { return &lib::Theta_gen(); }},
      {"P", [] { return &lib::P(); }},
      {"Q", [] { return &lib::Q(); }},
      {"W", [] { return &lib::W_pr(); }},
      {"W_PR", [] { return &lib::W_pr(); }},
      {"R", [] { return &lib::R(); }},
      {"G", [] { return &lib::G_ck(); }},
      {"G_CK", [] { return &lib::G_ck(); }},
      {"G_BRACKET", [] { return &lib::G_bracket(); }},
      {"GBR", [] { return &lib::G_bracket(); }},
      {"PAIR", [] { return &lib::pair_combinator(); }},
      {"PSI", [] {
         static const Term t = psi("z");
         return &t;
       }},
      {"UPSILON", [] {
         static const Term t = upsilon("c");
         return &t;
       }},
  };
  auto it = table.find(n);
  if (it == table.end()) return std::nullopt;
  return *it->second();
}

}  // namespace detail

/// Definition of a library combinator, by name (case-insensitive; "C_3" for C_k).
inline Term named(std::string_view name) {
  if (auto t = detail::lookup_combinator(name)) return *t;
  throw UnknownCombinator(std::string(name));
}

/// Names resolved by resolve_library: the spellings used in the library
/// table, written either as listed (Theta, delta) or fully upper-case.
inline bool is_library_name(std::string_view name) {
  if (name.empty()) return false;
  // Single lower-case letters stay variables.
  if (name.size() == 1 && std::islower(static_cast<unsigned char>(name[0]))) return false;
  bool listed = std::find(combinator_names().begin(), combinator_names().end(), std::string(name)) !=
                combinator_names().end();
  bool all_upper = detail::upper(name) == name;
  return (listed || all_upper) && detail::lookup_combinator(name).has_value();
}

/// Replaces free variables that name library combinators by their definitions.
inline Term resolve_library(const Term& t) {
  Term out = t;
  for (const auto& name : free_vars(t)) {
    if (is_library_name(name)) out = substitute(out, name, named(name));
  }
  return out;
}

/// parse() followed by resolve_library().
inline Term parse_with_library(std::string_view text) { return resolve_library(parse(text)); }

// ---------------------------------------------------------------------------

/// A defining equation lhs = rhs of the library, in displayed form.
struct DefiningEquation {
  std::string name;
  Term lhs;
  Term rhs;
};

inline std::vector<DefiningEquation> defining_equations() {
  auto v = [](const char* n) { return Term::var(n); };
  using lib::C;
  using lib::delta;
  using lib::I;
  using lib::K;
  std::vector<DefiningEquation> eqs;
  eqs.push_back({"I", Term::app(I(), v("x")), v("x")});
  eqs.push_back({"K", Term::apps(K(), {v("x"), v("y")}), v("x")});
  eqs.push_back({"C", Term::apps(C(), {v("f"), v("x"), v("y")}), Term::apps(v("f"), {v("y"), v("x")})});
  eqs.push_back({"C_3", Term::apps(lib::C_k(3), {v("x"), v("y")}), iterate(v("x"), 3, v("y"))});
  eqs.push_back({"delta", Term::apps(delta(), {v("y"), v("x")}), Term::app(v("x"), Term::app(v("y"), v("x")))});
  eqs.push_back({"Y_curry", Term::app(lib::Y_curry(), v("f")), Term::app(v("f"), Term::app(lib::Y_curry(), v("f")))});
  eqs.push_back({"Theta", Term::app(lib::Theta(), v("x")), Term::app(v("x"), Term::app(lib::Theta(), v("x")))});
  Term tm = theta_param(v("m"));
  eqs.push_back({"Theta_M", Term::app(tm, v("x")), Term::app(v("x"), Term::app(tm, v("x")))});
  Term wz = psi_builder("z");
  eqs.push_back({"W_z", Term::apps(wz, {v("w"), v("p"), v("x")}),
                 Term::app(v("x"), Term::apps(v("w"), {v("w"), Term::app(v("z"), v("p")), v("x")}))});
  eqs.push_back({"Psi_z", Term::app(psi("z"), v("x")),
                 Term::app(v("x"), Term::apps(wz, {wz, Term::app(v("z"), I()), v("x")}))});
  Term vx = upsilon_builder(v("x"), "c");
  eqs.push_back({"V_x", Term::apps(vx, {v("p"), v("v")}),
                 Term::app(v("x"), Term::apps(v("v"), {Term::app(v("c"), v("p")), v("v")}))});
  eqs.push_back({"Upsilon", Term::app(upsilon("c"), v("x")), upsilon_stage(v("x"), "c", 0)});
  eqs.push_back({"P", Term::apps(lib::P(), {v("x"), v("y")}), Term::app(v("y"), v("x"))});
  eqs.push_back({"Q", Term::apps(lib::Q(), {v("y"), v("z")}),
                 Term::app(v("z"), Term::apps(v("y"), {lib::Q(), v("z")}))});
  eqs.push_back({"W_pr", Term::apps(lib::W_pr(), {v("w"), v("p"), v("z")}),
                 Term::app(v("z"), Term::apps(v("w"), {v("w"), Term::app(v("z"), v("p")), v("z")}))});
  eqs.push_back({"R", Term::apps(lib::R(), {v("y"), v("z")}),
                 Term::apps(lib::W_pr(), {lib::W_pr(), Term::apps(v("y"), {lib::Q(), v("z")}), v("z")})});
  Term ycz = Term::app(v("y"), Term::app(C(), v("z")));
  eqs.push_back({"G_ck", Term::apps(lib::G_ck(), {v("y"), v("z")}),
                 Term::apps(v("z"), {ycz, Term::app(delta(), ycz)})});
  eqs.push_back({"G_bracket", Term::apps(lib::G_bracket(), {v("y"), v("x")}),
                 Term::app(v("x"), Term::apps(v("y"), {Term::app(K(), lib::pair(v("y"), v("x"))), I()}))});
  eqs.push_back({"pair", Term::app(lib::pair(v("p"), v("q")), v("z")), Term::apps(v("z"), {v("p"), v("q")})});
  eqs.push_back({"pair_combinator", Term::apps(lib::pair_combinator(), {v("p"), v("q"), v("z")}),
                 Term::apps(v("z"), {v("p"), v("q")})});
  return eqs;
}

}  // namespace fpclab
