#include <gtest/gtest.h>

#include "fpclab/boehm.hpp"
#include "fpclab/combinators.hpp"
#include "support.hpp"

using namespace fpclab;
using testing_support::P;
using testing_support::TermGen;
using testing_support::to_oracle;

namespace {

constexpr std::size_t kBig = 2000;

BoehmApprox prune(const BoehmApprox& a, std::size_t depth) {
  if (depth == 0 || a.is_bottom()) return BoehmApprox::bottom();
  BoehmApprox out = a;
  for (auto& c : out.children) c = prune(c, depth - 1);
  return out;
}

}  // namespace

TEST(HeadNormalForm, Examples) {
  auto om = head_normal_form(lib::Omega(), 50);
  EXPECT_FALSE(om.solved);
  EXPECT_TRUE(om.proven_unsolvable);

  Term x = Term::var("x");
  auto tx = head_normal_form(Term::app(lib::Theta(), x), 10);
  ASSERT_TRUE(tx.solved);
  EXPECT_TRUE(tx.binders.empty());
  EXPECT_EQ(*tx.head, x);
  ASSERT_EQ(tx.args.size(), 1u);
  EXPECT_EQ(tx.args[0], Term::apps(lib::V(), {lib::V(), x}));
  EXPECT_EQ(tx.steps, 2u);

  auto lam = head_normal_form(Term::lam("x", Term::app(Term::var("x"), lib::Omega())), 10);
  ASSERT_TRUE(lam.solved);
  EXPECT_EQ(lam.steps, 0u);
  EXPECT_EQ(lam.binders, std::vector<std::string>{"x"});
  EXPECT_TRUE(lam.head->is_bound());
  ASSERT_EQ(lam.args.size(), 1u);
  EXPECT_EQ(lam.args[0], lib::Omega());
}

TEST(HeadNormalForm, FuelExhaustionIsNotUnsolvability) {
  // Grows under head reduction, never repeating.
  auto r = head_normal_form(P("(\\x. x x x) (\\x. x x x)"), 5);
  EXPECT_FALSE(r.solved);
  EXPECT_FALSE(r.proven_unsolvable);
  EXPECT_EQ(r.steps, 5u);
  EXPECT_TRUE(approximant(P("(\\x. x x x) (\\x. x x x)"), 3, 5).is_bottom());
}

TEST(Approximant, Examples) {
  EXPECT_TRUE(approximant(lib::Omega(), 5, 100).is_bottom());
  auto tx = approximant(Term::app(lib::Theta(), Term::var("x")), 3, kBig);
  EXPECT_EQ(render(tx), "x (x (x ⊥))");
  EXPECT_EQ(render(tx, true), "x (x (x _|_))");
  EXPECT_EQ(tx, spine_approx("x", 3));
  auto id = approximant(lib::I(), 2, kBig);
  ASSERT_FALSE(id.is_bottom());
  EXPECT_EQ(id.binders.size(), 1u);
  EXPECT_TRUE(id.head_bound);
  EXPECT_TRUE(id.children.empty());
  EXPECT_EQ(render(id), "\\x. x");
}

TEST(Approximant, JsonExport) {
  json j = approximant(Term::app(lib::Theta(), Term::var("x")), 2, kBig);
  EXPECT_EQ(j["head"], "x");
  EXPECT_EQ(j["children"][0]["head"], "x");
  EXPECT_EQ(j["children"][0]["children"][0]["bottom"], true);
}

TEST(Approximant, FpcsUnrollToSpines) {
  Term x = Term::var("x");
  for (const Term& y : {lib::Theta(), lib::Y_curry(), theta_param(lib::I()), theta_param(lib::K()), psi("z"),
                        upsilon("c")}) {
    for (std::size_t d = 0; d <= 8; ++d) EXPECT_EQ(approximant(Term::app(y, x), d, kBig), spine_approx("x", d)) << print(y);
  }
}

TEST(BtEq, Examples) {
  auto a = bt_eq_bounded(lib::Theta(), lib::Y_curry(), 4, kBig);
  EXPECT_TRUE(a.agree);
  auto b = bt_eq_bounded(lib::I(), lib::K(), 1, kBig);
  EXPECT_FALSE(b.agree);
  EXPECT_TRUE(b.definitive);
  EXPECT_TRUE(b.path.empty());
  EXPECT_TRUE(bt_eq_bounded(upsilon("c"), lib::Theta(), 4, kBig).agree);
}

TEST(BtEq, BottomMatchesOnlyBottom) {
  auto r = bt_eq_bounded(Term::app(Term::var("x"), lib::Omega()), P("x y"), 3, kBig);
  EXPECT_FALSE(r.agree);
  EXPECT_FALSE(r.definitive);
  EXPECT_EQ(r.path, std::vector<std::size_t>{0});
}

TEST(Occurs, Examples) {
  auto a = occurs_in_approx("z", Term::app(Term::var("z"), lib::Omega()), 1, kBig);
  EXPECT_TRUE(a.present);
  EXPECT_TRUE(a.path.empty());

  Term z = Term::var("z"), x = Term::var("x");
  auto b = occurs_in_approx("z", Term::apps(lib::P(), {z, lib::R(), x}), 6, kBig);
  EXPECT_FALSE(b.present);
  EXPECT_EQ(b.depth, 6u);

  auto c = occurs_in_approx("z", Term::apps(iterate(lib::delta(), 1, z), {lib::P(), lib::Q(), x}), 3, kBig);
  EXPECT_TRUE(c.present);
  EXPECT_EQ(c.path, std::vector<std::size_t>{0});
}

TEST(Occurs, BinderIsNotAnOccurrence) {
  EXPECT_FALSE(occurs_in_approx("z", P("\\z. z"), 3, kBig).present);
}

// ---------------------------------------------------------------------------
// Properties

TEST(BoehmProperty, HeadNormalFormAgreesWithOracle) {
  TermGen gen(0xb0e);
  int solved = 0;
  for (int i = 0; i < 500; ++i) {
    auto p = gen.redex_dense(gen.uniform(3, 20));
    auto mine = head_normal_form(p.term, 100);
    auto ref = oracle::hnf(p.expr, 100);
    if (mine.solved) {
      ASSERT_TRUE(ref) << print(p.term);
      ASSERT_TRUE(oracle::alpha_eq(to_oracle(*mine.last), *ref)) << print(p.term);
      ++solved;
    }
    if (mine.proven_unsolvable) ASSERT_FALSE(oracle::hnf(p.expr, 300)) << print(p.term);
  }
  EXPECT_GT(solved, 300);
}

TEST(BoehmProperty, ApproximantMonotone) {
  TermGen gen(0xb0f);
  std::vector<Term> pool = {Term::app(lib::Theta(), Term::var("x")), Term::app(lib::Y_curry(), lib::delta()),
                            Term::app(psi("z"), Term::var("x"))};
  for (int i = 0; i < 300; ++i) pool.push_back(gen.redex_dense(gen.uniform(3, 20)).term);
  for (const auto& t : pool) {
    auto deep = approximant(t, 6, kBig);
    for (std::size_t d = 0; d < 6; ++d) ASSERT_EQ(approximant(t, d, kBig), prune(deep, d)) << print(t) << " d=" << d;
  }
}

TEST(BoehmProperty, PresentStableUnderMoreDepth) {
  TermGen gen(0xb10);
  int present = 0;
  for (int i = 0; i < 300; ++i) {
    auto t = gen.redex_dense(gen.uniform(3, 20)).term;
    auto r = occurs_in_approx("a", t, 3, 200);
    if (!r.present) continue;
    ++present;
    auto deeper = occurs_in_approx("a", t, 6, 2000);
    ASSERT_TRUE(deeper.present) << print(t);
    ASSERT_EQ(deeper.path, r.path) << print(t);
  }
  EXPECT_GT(present, 50);
}
