#pragma once

// Test-only reference reducer: named variables, capture-avoiding substitution
// by renaming, leftmost-outermost normalization. Shares no code with fpclab.

#include <cctype>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

struct Expr;
using Ptr = std::shared_ptr<const Expr>;

struct Expr {
  enum Tag { Var, Lam, App } tag;
  std::string name;  // Var: variable, Lam: binder
  Ptr a, b;          // Lam: body in a; App: fun a, arg b
};

inline Ptr var(std::string n) { return std::make_shared<Expr>(Expr{Expr::Var, std::move(n), nullptr, nullptr}); }
inline Ptr lam(std::string n, Ptr body) { return std::make_shared<Expr>(Expr{Expr::Lam, std::move(n), std::move(body), nullptr}); }
inline Ptr app(Ptr f, Ptr x) { return std::make_shared<Expr>(Expr{Expr::App, "", std::move(f), std::move(x)}); }

inline void free_vars(const Ptr& e, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (e->tag) {
    case Expr::Var:
      if (!bound.count(e->name)) out.insert(e->name);
      return;
    case Expr::Lam: {
      bool had = bound.count(e->name) > 0;
      bound.insert(e->name);
      free_vars(e->a, bound, out);
      if (!had) bound.erase(e->name);
      return;
    }
    case Expr::App:
      free_vars(e->a, bound, out);
      free_vars(e->b, bound, out);
      return;
  }
}

inline std::set<std::string> free_vars(const Ptr& e) {
  std::set<std::string> bound, out;
  free_vars(e, bound, out);
  return out;
}

inline void all_names(const Ptr& e, std::set<std::string>& out) {
  out.insert(e->name);
  if (e->a) all_names(e->a, out);
  if (e->b) all_names(e->b, out);
}

inline std::string fresh(const std::string& base, const std::set<std::string>& avoid) {
  for (int i = 0;; ++i) {
    std::string n = base + "_" + std::to_string(i);
    if (!avoid.count(n)) return n;
  }
}

// e[x := v]
inline Ptr subst(const Ptr& e, const std::string& x, const Ptr& v) {
  switch (e->tag) {
    case Expr::Var:
      return e->name == x ? v : e;
    case Expr::App:
      return app(subst(e->a, x, v), subst(e->b, x, v));
    case Expr::Lam: {
      if (e->name == x) return e;
      auto fv = free_vars(v);
      if (!fv.count(e->name)) return lam(e->name, subst(e->a, x, v));
      std::set<std::string> avoid = fv;
      all_names(e->a, avoid);
      avoid.insert(x);
      std::string y = fresh(e->name, avoid);
      return lam(y, subst(subst(e->a, e->name, var(y)), x, v));
    }
  }
  return e;
}

inline bool alpha_eq(const Ptr& a, const Ptr& b, std::vector<std::pair<std::string, std::string>>& env) {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Expr::Var:
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        if (it->first == a->name || it->second == b->name) return it->first == a->name && it->second == b->name;
      }
      return a->name == b->name;
    case Expr::Lam: {
      env.emplace_back(a->name, b->name);
      bool r = alpha_eq(a->a, b->a, env);
      env.pop_back();
      return r;
    }
    case Expr::App:
      return alpha_eq(a->a, b->a, env) && alpha_eq(a->b, b->b, env);
  }
  return false;
}

inline bool alpha_eq(const Ptr& a, const Ptr& b) {
  std::vector<std::pair<std::string, std::string>> env;
  return alpha_eq(a, b, env);
}

inline std::size_t size(const Ptr& e) {
  return 1 + (e->a ? size(e->a) : 0) + (e->b ? size(e->b) : 0);
}

// One leftmost-outermost step, or nullopt at a normal form.
inline std::optional<Ptr> lo_step(const Ptr& e) {
  switch (e->tag) {
    case Expr::Var:
      return std::nullopt;
    case Expr::Lam:
      if (auto b = lo_step(e->a)) return lam(e->name, *b);
      return std::nullopt;
    case Expr::App:
      if (e->a->tag == Expr::Lam) return subst(e->a->a, e->a->name, e->b);
      if (auto f = lo_step(e->a)) return app(*f, e->b);
      if (auto x = lo_step(e->b)) return app(e->a, *x);
      return std::nullopt;
  }
  return std::nullopt;
}

struct NfResult {
  Ptr term;
  std::size_t steps = 0;
  bool normal = false;
};

inline NfResult normalize(Ptr e, std::size_t max_steps, std::size_t max_size = 100000) {
  NfResult r{e, 0, false};
  while (r.steps < max_steps && size(r.term) <= max_size) {
    auto next = lo_step(r.term);
    if (!next) {
      r.normal = true;
      return r;
    }
    r.term = *next;
    ++r.steps;
  }
  r.normal = !lo_step(r.term).has_value();
  return r;
}

// Head reduction; nullopt if no head normal form within fuel.
inline std::optional<Ptr> hnf(Ptr e, std::size_t fuel) {
  for (std::size_t i = 0; i <= fuel; ++i) {
    std::vector<std::string> binders;
    Ptr cur = e;
    while (cur->tag == Expr::Lam) {
      binders.push_back(cur->name);
      cur = cur->a;
    }
    std::vector<Ptr> args;
    Ptr head = cur;
    while (head->tag == Expr::App) {
      args.push_back(head->b);
      head = head->a;
    }
    if (head->tag == Expr::Var) return e;
    if (i == fuel) break;
    // head is a lambda applied to the innermost argument
    Ptr reduced = subst(head->a, head->name, args.back());
    args.pop_back();
    for (auto it = args.rbegin(); it != args.rend(); ++it) reduced = app(reduced, *it);
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) reduced = lam(*it, reduced);
    e = reduced;
  }
  return std::nullopt;
}

// Parser for the same surface syntax: \x y. M, application by juxtaposition, parentheses.
class Parser {
 public:
  explicit Parser(std::string s) : s_(std::move(s)) {}
  Ptr run() {
    Ptr e = term();
    skip();
    if (i_ != s_.size()) throw std::runtime_error("oracle parse: trailing input");
    return e;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool ident_char(char c) const { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '^'; }
  std::string ident() {
    skip();
    std::size_t st = i_;
    while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
    if (st == i_) throw std::runtime_error("oracle parse: expected identifier");
    return s_.substr(st, i_ - st);
  }
  Ptr term() {
    skip();
    if (i_ < s_.size() && s_[i_] == '\\') {
      ++i_;
      std::vector<std::string> names;
      skip();
      while (i_ < s_.size() && s_[i_] != '.') {
        names.push_back(ident());
        skip();
      }
      ++i_;
      Ptr body = term();
      for (auto it = names.rbegin(); it != names.rend(); ++it) body = lam(*it, body);
      return body;
    }
    Ptr e = atom();
    for (;;) {
      skip();
      if (i_ >= s_.size() || s_[i_] == ')') return e;
      if (s_[i_] == '\\') return app(e, term());
      e = app(e, atom());
    }
  }
  Ptr atom() {
    skip();
    if (s_[i_] == '(') {
      ++i_;
      Ptr e = term();
      skip();
      if (i_ >= s_.size() || s_[i_] != ')') throw std::runtime_error("oracle parse: expected )");
      ++i_;
      return e;
    }
    return var(ident());
  }
  std::string s_;
  std::size_t i_ = 0;
};

inline Ptr parse(const std::string& s) { return Parser(s).run(); }

inline std::string show(const Ptr& e) {
  switch (e->tag) {
    case Expr::Var:
      return e->name;
    case Expr::Lam:
      return "(\\" + e->name + ". " + show(e->a) + ")";
    case Expr::App:
      return "(" + show(e->a) + " " + show(e->b) + ")";
  }
  return "";
}

}  // namespace oracle
