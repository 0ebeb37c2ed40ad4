#pragma once

// Untyped lambda terms.
//
// Terms are immutable, reference-counted trees stored in nameless form:
// bound occurrences carry de Bruijn indices, free occurrences carry names,
// and abstractions keep their binder name only as a printing hint. Two terms
// are alpha-equivalent exactly when their trees are structurally equal, so
// operator== is alpha equality and std::hash<Term> is alpha-invariant.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fpclab {

/// Raised by parse() on malformed input. position is a byte offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : std::runtime_error("parse error at " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

namespace detail {
struct Node;
}

class Term {
 public:
  enum class Kind : std::uint8_t { Bound, Free, Lam, App };

  /// Free variable.
  static Term var(std::string name);
  /// Abstraction binding every free occurrence of `binder` in `body`.
  static Term lam(const std::string& binder, const Term& body);
  static Term app(Term fun, Term arg);
  /// Left-nested application fun a0 a1 ... an.
  static Term apps(Term fun, const std::vector<Term>& args);

  // Nameless constructors. `hint` only affects printing.
  static Term bound(std::uint32_t index);
  static Term lam_nameless(std::string hint, Term body);

  Kind kind() const noexcept;
  bool is_var() const noexcept { return kind() == Kind::Free; }
  bool is_lam() const noexcept { return kind() == Kind::Lam; }
  bool is_app() const noexcept { return kind() == Kind::App; }
  bool is_bound() const noexcept { return kind() == Kind::Bound; }
  /// Application whose function is an abstraction.
  bool is_redex() const noexcept;

  /// Free name (Free) or binder hint (Lam).
  const std::string& name() const noexcept;
  std::uint32_t index() const noexcept;
  const Term& fun() const noexcept;
  const Term& arg() const noexcept;
  const Term& body() const noexcept;

  /// Node count: variable = 1, abstraction = 1 + body, application = 1 + both.
  std::size_t size() const noexcept;
  std::size_t hash() const noexcept;
  /// One more than the largest de Bruijn index pointing outside the term.
  std::uint32_t loose() const noexcept;
  bool has_free() const noexcept;
  bool closed() const noexcept { return !has_free() && loose() == 0; }

  bool same_node(const Term& other) const noexcept { return node_ == other.node_; }

  friend bool operator==(const Term& a, const Term& b) noexcept;
  friend bool operator!=(const Term& a, const Term& b) noexcept { return !(a == b); }

 private:
  friend struct detail::Node;
  Term() = default;
  explicit Term(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::Node> node_;
};

namespace detail {

struct Node {
  Term::Kind kind;
  std::uint32_t index = 0;
  std::uint32_t loose = 0;
  bool has_free = false;
  std::size_t size = 1;
  std::size_t hash = 0;
  std::string name;
  // App: fun, arg. Lam: body in `left`.
  Term left;
  Term right;
};

inline std::size_t mix(std::size_t h, std::size_t v) noexcept {
  std::uint64_t x = static_cast<std::uint64_t>(h) ^ (static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return static_cast<std::size_t>(x ^ (x >> 31));
}

}  // namespace detail

inline Term::Kind Term::kind() const noexcept { return node_->kind; }
inline bool Term::is_redex() const noexcept {
  return node_->kind == Kind::App && node_->left.kind() == Kind::Lam;
}
inline const std::string& Term::name() const noexcept { return node_->name; }
inline std::uint32_t Term::index() const noexcept { return node_->index; }
inline const Term& Term::fun() const noexcept { return node_->left; }
inline const Term& Term::arg() const noexcept { return node_->right; }
inline const Term& Term::body() const noexcept { return node_->left; }
inline std::size_t Term::size() const noexcept { return node_->size; }
inline std::size_t Term::hash() const noexcept { return node_->hash; }
inline std::uint32_t Term::loose() const noexcept { return node_->loose; }
inline bool Term::has_free() const noexcept { return node_->has_free; }

inline Term Term::var(std::string name) {
  auto n = std::make_shared<detail::Node>();
  n->kind = Kind::Free;
  n->hash = detail::mix(0x51, std::hash<std::string>{}(name));
  n->name = std::move(name);
  n->has_free = true;
  return Term(std::move(n));
}

inline Term Term::bound(std::uint32_t index) {
  auto n = std::make_shared<detail::Node>();
  n->kind = Kind::Bound;
  n->index = index;
  n->loose = index + 1;
  n->hash = detail::mix(0xB0, index);
  return Term(std::move(n));
}

inline Term Term::lam_nameless(std::string hint, Term body) {
  auto n = std::make_shared<detail::Node>();
  n->kind = Kind::Lam;
  n->name = std::move(hint);
  n->loose = body.loose() > 0 ? body.loose() - 1 : 0;
  n->has_free = body.has_free();
  n->size = 1 + body.size();
  n->hash = detail::mix(0x1A, body.hash());
  n->left = std::move(body);
  return Term(std::move(n));
}

inline Term Term::app(Term fun, Term arg) {
  auto n = std::make_shared<detail::Node>();
  n->kind = Kind::App;
  n->loose = std::max(fun.loose(), arg.loose());
  n->has_free = fun.has_free() || arg.has_free();
  n->size = 1 + fun.size() + arg.size();
  n->hash = detail::mix(detail::mix(0xA9, fun.hash()), arg.hash());
  n->left = std::move(fun);
  n->right = std::move(arg);
  return Term(std::move(n));
}

inline Term Term::apps(Term fun, const std::vector<Term>& args) {
  for (const auto& a : args) fun = app(std::move(fun), a);
  return fun;
}

inline bool operator==(const Term& a, const Term& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Bound:
      return a.index() == b.index();
    case Term::Kind::Free:
      return a.name() == b.name();
    case Term::Kind::Lam:
      return a.body() == b.body();
    case Term::Kind::App:
      return a.fun() == b.fun() && a.arg() == b.arg();
  }
  return false;
}

inline bool alpha_eq(const Term& a, const Term& b) noexcept { return a == b; }

// ---------------------------------------------------------------------------
// Index manipulation

/// Adds `delta` to every bound index >= cutoff.
inline Term shift(const Term& t, std::int32_t delta, std::uint32_t cutoff = 0) {
  if (delta == 0 || t.loose() <= cutoff) return t;
  switch (t.kind()) {
    case Term::Kind::Bound:
      return Term::bound(static_cast<std::uint32_t>(static_cast<std::int64_t>(t.index()) + delta));
    case Term::Kind::Free:
      return t;
    case Term::Kind::Lam:
      return Term::lam_nameless(t.name(), shift(t.body(), delta, cutoff + 1));
    case Term::Kind::App:
      return Term::app(shift(t.fun(), delta, cutoff), shift(t.arg(), delta, cutoff));
  }
  return t;
}

namespace detail {

inline Term instantiate_at(const Term& t, const Term& value, std::uint32_t depth) {
  if (t.loose() <= depth) return t;
  switch (t.kind()) {
    case Term::Kind::Bound:
      if (t.index() == depth) return shift(value, static_cast<std::int32_t>(depth));
      return Term::bound(t.index() - 1);
    case Term::Kind::Free:
      return t;
    case Term::Kind::Lam:
      return Term::lam_nameless(t.name(), instantiate_at(t.body(), value, depth + 1));
    case Term::Kind::App:
      return Term::app(instantiate_at(t.fun(), value, depth), instantiate_at(t.arg(), value, depth));
  }
  return t;
}

inline Term abstract_at(const Term& t, const std::string& name, std::uint32_t depth) {
  if (!t.has_free() && t.loose() <= depth) return t;
  switch (t.kind()) {
    case Term::Kind::Bound:
      return t.index() >= depth ? Term::bound(t.index() + 1) : t;
    case Term::Kind::Free:
      return t.name() == name ? Term::bound(depth) : t;
    case Term::Kind::Lam:
      return Term::lam_nameless(t.name(), abstract_at(t.body(), name, depth + 1));
    case Term::Kind::App:
      return Term::app(abstract_at(t.fun(), name, depth), abstract_at(t.arg(), name, depth));
  }
  return t;
}

inline Term substitute_at(const Term& t, const std::string& name, const Term& value, std::uint32_t depth) {
  if (!t.has_free()) return t;
  switch (t.kind()) {
    case Term::Kind::Bound:
      return t;
    case Term::Kind::Free:
      return t.name() == name ? shift(value, static_cast<std::int32_t>(depth)) : t;
    case Term::Kind::Lam:
      return Term::lam_nameless(t.name(), substitute_at(t.body(), name, value, depth + 1));
    case Term::Kind::App:
      return Term::app(substitute_at(t.fun(), name, value, depth), substitute_at(t.arg(), name, value, depth));
  }
  return t;
}

inline bool mentions(const Term& t, const std::string& name) {
  if (!t.has_free()) return false;
  switch (t.kind()) {
    case Term::Kind::Free:
      return t.name() == name;
    case Term::Kind::Lam:
      return mentions(t.body(), name);
    case Term::Kind::App:
      return mentions(t.fun(), name) || mentions(t.arg(), name);
    default:
      return false;
  }
}

inline void collect_free(const Term& t, std::set<std::string>& out) {
  if (!t.has_free()) return;
  switch (t.kind()) {
    case Term::Kind::Free:
      out.insert(t.name());
      break;
    case Term::Kind::Lam:
      collect_free(t.body(), out);
      break;
    case Term::Kind::App:
      collect_free(t.fun(), out);
      collect_free(t.arg(), out);
      break;
    default:
      break;
  }
}

}  // namespace detail

/// Contracts a beta redex (\x. body) arg at the root.
inline Term beta(const Term& redex) { return detail::instantiate_at(redex.fun().body(), redex.arg(), 0); }

/// Body of an abstraction with its binder replaced by `value`.
inline Term instantiate(const Term& lam, const Term& value) { return detail::instantiate_at(lam.body(), value, 0); }

inline Term Term::lam(const std::string& binder, const Term& body) {
  return lam_nameless(binder, detail::abstract_at(body, binder, 0));
}

// ---------------------------------------------------------------------------
// Named-variable calculus

inline std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  detail::collect_free(t, out);
  return out;
}

inline bool occurs_free(const std::string& name, const Term& t) { return detail::mentions(t, name); }

/// Capture-avoiding substitution t[name := value]. Binders are nameless, so
/// no renaming is ever needed; the printer picks non-clashing binder names.
inline Term substitute(const Term& t, const std::string& name, const Term& value) {
  return detail::substitute_at(t, name, value, 0);
}

/// Machine-generated names carry a '^' suffix, which the surface grammar
/// rejects unless reserved names are explicitly allowed.
inline bool is_reserved(std::string_view name) { return name.find('^') != std::string_view::npos; }

inline std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string candidate = base + "^";
  for (std::size_t i = 1; avoid.count(candidate) != 0; ++i) candidate = base + "^" + std::to_string(i);
  return candidate;
}

inline std::string fresh_name(const std::string& base, std::initializer_list<const Term*> avoid_terms) {
  std::set<std::string> avoid;
  for (const Term* t : avoid_terms) detail::collect_free(*t, avoid);
  return fresh_name(base, avoid);
}

/// F^k(z).
inline Term iterate(const Term& f, std::size_t k, Term z) {
  for (std::size_t i = 0; i < k; ++i) z = Term::app(f, std::move(z));
  return z;
}

// ---------------------------------------------------------------------------
// Parsing
//
//   term  := lam | app
//   lam   := ('\' | 'λ') ident+ '.' term
//   app   := atom+ [lam]
//   atom  := ident | '(' term ')'
//   ident := [A-Za-z_][A-Za-z0-9_']*
//
// '#' starts a comment running to end of line.

struct ParseOptions {
  /// Accept '^' inside identifiers (names produced by fresh_name).
  bool allow_reserved = false;
};

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, ParseOptions options) : text_(text), options_(options) {}

  Term parse_all() {
    skip();
    if (pos_ >= text_.size()) throw ParseError(pos_, "empty input");
    Term t = parse_term();
    skip();
    if (pos_ < text_.size()) throw ParseError(pos_, std::string("unexpected '") + text_[pos_] + "'");
    return t;
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool at_lambda() const {
    if (pos_ < text_.size() && text_[pos_] == '\\') return true;
    return text_.substr(pos_, 2) == "\xCE\xBB";
  }

  static bool ident_start(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  }
  bool ident_char(char c) const {
    return ident_start(c) || (c >= '0' && c <= '9') || c == '\'' || (options_.allow_reserved && c == '^');
  }
  bool at_ident() const { return pos_ < text_.size() && ident_start(text_[pos_]); }

  std::string ident() {
    if (!at_ident()) throw ParseError(pos_, "expected identifier");
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '^')
      throw ParseError(pos_, "'^' is reserved for generated names");
    return std::string(text_.substr(start, pos_ - start));
  }

  Term parse_term() {
    skip();
    if (at_lambda()) return parse_lam();
    return parse_app();
  }

  Term parse_lam() {
    pos_ += text_[pos_] == '\\' ? 1 : 2;
    skip();
    std::vector<std::string> binders;
    while (at_ident()) {
      binders.push_back(ident());
      skip();
    }
    if (binders.empty()) throw ParseError(pos_, "expected binder after lambda");
    if (pos_ >= text_.size() || text_[pos_] != '.') throw ParseError(pos_, "expected '.'");
    ++pos_;
    for (const auto& b : binders) scope_.push_back(b);
    Term body = parse_term();
    for (std::size_t i = binders.size(); i-- > 0;) {
      scope_.pop_back();
      body = Term::lam_nameless(binders[i], std::move(body));
    }
    return body;
  }

  bool at_atom() const {
    return pos_ < text_.size() && (text_[pos_] == '(' || ident_start(text_[pos_]));
  }

  Term parse_app() {
    skip();
    if (!at_atom()) {
      if (pos_ >= text_.size()) throw ParseError(pos_, "unexpected end of input");
      throw ParseError(pos_, std::string("unexpected '") + text_[pos_] + "'");
    }
    Term acc = parse_atom();
    for (;;) {
      skip();
      if (at_atom()) {
        acc = Term::app(std::move(acc), parse_atom());
      } else if (at_lambda()) {
        acc = Term::app(std::move(acc), parse_lam());
        return acc;
      } else {
        return acc;
      }
    }
  }

  Term parse_atom() {
    if (text_[pos_] == '(') {
      ++pos_;
      Term inner = parse_term();
      skip();
      if (pos_ >= text_.size() || text_[pos_] != ')') throw ParseError(pos_, "expected ')'");
      ++pos_;
      return inner;
    }
    std::string name = ident();
    for (std::size_t i = scope_.size(); i-- > 0;) {
      if (scope_[i] == name) return Term::bound(static_cast<std::uint32_t>(scope_.size() - 1 - i));
    }
    return Term::var(std::move(name));
  }

  std::string_view text_;
  ParseOptions options_;
  std::size_t pos_ = 0;
  std::vector<std::string> scope_;
};

}  // namespace detail

inline Term parse(std::string_view text, ParseOptions options = {}) {
  return detail::Parser(text, options).parse_all();
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

class Printer {
 public:
  std::string run(const Term& t) {
    out_.clear();
    term(t);
    return out_;
  }

 private:
  // Names a binder must avoid: free names of its body and the names of
  // enclosing binders the body refers to.
  void used_names(const Term& t, std::uint32_t depth, std::set<std::string>& out) const {
    if (!t.has_free() && t.loose() <= depth) return;
    switch (t.kind()) {
      case Term::Kind::Bound:
        if (t.index() >= depth) out.insert(scope_[scope_.size() - 1 - (t.index() - depth)]);
        break;
      case Term::Kind::Free:
        out.insert(t.name());
        break;
      case Term::Kind::Lam:
        used_names(t.body(), depth + 1, out);
        break;
      case Term::Kind::App:
        used_names(t.fun(), depth, out);
        used_names(t.arg(), depth, out);
        break;
    }
  }

  static std::string clean_hint(const std::string& hint) {
    std::string s;
    for (char c : hint) {
      if (c == '^') break;
      s += c;
    }
    if (s.empty() || !((s[0] >= 'a' && s[0] <= 'z') || (s[0] >= 'A' && s[0] <= 'Z') || s[0] == '_')) return "x";
    return s;
  }

  std::string choose(const Term& lam) {
    std::set<std::string> avoid;
    used_names(lam.body(), 1, avoid);
    std::string name = clean_hint(lam.name());
    while (avoid.count(name) != 0) name += '\'';
    return name;
  }

  void term(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Bound:
        if (t.index() < scope_.size()) {
          out_ += scope_[scope_.size() - 1 - t.index()];
        } else {
          out_ += "<" + std::to_string(t.index()) + ">";
        }
        return;
      case Term::Kind::Free:
        out_ += t.name();
        return;
      case Term::Kind::Lam: {
        out_ += '\\';
        const Term* cur = &t;
        std::size_t pushed = 0;
        while (cur->is_lam()) {
          std::string name = choose(*cur);
          if (pushed > 0) out_ += ' ';
          out_ += name;
          scope_.push_back(std::move(name));
          ++pushed;
          cur = &cur->body();
        }
        out_ += ". ";
        term(*cur);
        scope_.resize(scope_.size() - pushed);
        return;
      }
      case Term::Kind::App: {
        std::vector<const Term*> spine;
        const Term* cur = &t;
        while (cur->is_app()) {
          spine.push_back(&cur->arg());
          cur = &cur->fun();
        }
        atom(*cur, cur->is_lam());
        for (std::size_t i = spine.size(); i-- > 0;) {
          out_ += ' ';
          atom(*spine[i], !spine[i]->is_var() && !spine[i]->is_bound());
        }
        return;
      }
    }
  }

  void atom(const Term& t, bool parens) {
    if (parens) out_ += '(';
    term(t);
    if (parens) out_ += ')';
  }

  std::vector<std::string> scope_;
  std::string out_;
};

}  // namespace detail

/// Deterministic rendering with minimal parentheses; parse(print(t)) == t.
inline std::string print(const Term& t) { return detail::Printer{}.run(t); }

}  // namespace fpclab

template <>
struct std::hash<fpclab::Term> {
  std::size_t operator()(const fpclab::Term& t) const noexcept { return t.hash(); }
};
