#pragma once

// Shared helpers for the test binaries: random terms built in parallel for
// fpclab and for the oracle, and conversions between the two.

#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fpclab/combinators.hpp"
#include "fpclab/reduction.hpp"
#include "fpclab/term.hpp"
#include "oracle.hpp"

namespace fpclab {
// Readable gtest failure messages.
inline void PrintTo(const Term& t, std::ostream* os) { *os << print(t); }
}  // namespace fpclab

namespace testing_support {

using fpclab::Term;

struct Pair {
  Term term;
  oracle::Ptr expr;
};

inline oracle::Ptr to_oracle(const Term& t) { return oracle::parse(fpclab::print(t)); }

/// Random term with exactly `size` nodes. Binder names come from a small pool
/// so shadowing is common; free names are a, b, c.
class TermGen {
 public:
  explicit TermGen(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  Pair term(std::size_t size) {
    std::vector<std::string> scope;
    return build(size, scope);
  }

  /// Size drawn uniformly from [lo, hi].
  Pair term_between(std::size_t lo, std::size_t hi) { return term(uniform(lo, hi)); }

  /// Random term in which most applications have an abstraction in
  /// function position, so several reduction paths usually exist.
  Pair redex_dense(std::size_t size) {
    dense_ = true;
    std::vector<std::string> scope;
    Pair p = build(size, scope);
    dense_ = false;
    return p;
  }

  /// A term biased towards redexes: (\x. body) arg at the root.
  Pair redex_rich(std::size_t size) {
    if (size < 4) return term(size);
    std::size_t body = uniform(1, size - 3);
    std::vector<std::string> scope{"x"};
    Pair b = build(body, scope);
    scope.clear();
    Pair a = build(size - 2 - body, scope);
    return {Term::app(Term::lam("x", b.term), a.term), oracle::app(oracle::lam("x", b.expr), a.expr)};
  }

 private:
  Pair variable(const std::vector<std::string>& scope) {
    static const char* free_names[] = {"a", "b", "c"};
    std::string name;
    if (!scope.empty() && uniform(0, 3) != 0) {
      name = scope[uniform(0, scope.size() - 1)];
    } else {
      name = free_names[uniform(0, 2)];
    }
    return {Term::var(name), oracle::var(name)};
  }

  Pair build(std::size_t size, std::vector<std::string>& scope) {
    if (size <= 1) return variable(scope);
    if (size == 2 || uniform(0, 2) == 0) return abstraction(size, scope);
    std::size_t left = uniform(1, size - 2);
    Pair f = dense_ && left >= 2 && uniform(0, 3) != 0 ? abstraction(left, scope) : build(left, scope);
    Pair x = build(size - 1 - left, scope);
    return {Term::app(f.term, x.term), oracle::app(f.expr, x.expr)};
  }

  Pair abstraction(std::size_t size, std::vector<std::string>& scope) {
    static const char* binders[] = {"x", "y", "z", "w"};
    std::string b = binders[uniform(0, 3)];
    scope.push_back(b);
    Pair body = build(size - 1, scope);
    scope.pop_back();
    return {Term::lam(b, body.term), oracle::lam(b, body.expr)};
  }

  std::mt19937_64 rng_;
  bool dense_ = false;
};

inline Term P(const char* text) { return fpclab::parse_with_library(text); }

}  // namespace testing_support
