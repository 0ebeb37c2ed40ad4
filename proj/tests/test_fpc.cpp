#include <gtest/gtest.h>

#include "fpclab/combinators.hpp"
#include "fpclab/fpc.hpp"
#include "support.hpp"

using namespace fpclab;
using testing_support::P;

namespace {
const Bounds kFuel500{500, 20000, 4000};
}

TEST(IsFpc, Examples) {
  auto theta = is_fpc_bounded(lib::Theta(), Bounds{});
  EXPECT_TRUE(theta.verified());
  EXPECT_TRUE(is_reserved(theta.var));
  ASSERT_TRUE(theta.join && theta.join->witness);

  auto k = is_fpc_bounded(lib::K(), Bounds{});
  EXPECT_TRUE(k.refuted());
  ASSERT_TRUE(k.join->nf_left && k.join->nf_right);
  Term x = Term::var(k.var);
  EXPECT_EQ(*k.join->nf_left, Term::lam("y", x));
  EXPECT_EQ(*k.join->nf_right, Term::app(x, Term::lam("y", x)));

  EXPECT_TRUE(is_fpc_bounded(upsilon("c"), Bounds{}).unknown());
}

TEST(IsFpc, LibraryFpcs) {
  for (const Term& y : {lib::Theta(), lib::Y_curry(), theta_param(lib::I()), theta_param(lib::K()),
                        theta_param(lib::Omega()), Term::app(lib::Y_curry(), lib::delta()), Term::app(lib::Theta(), lib::Theta_gen())}) {
    EXPECT_TRUE(is_fpc_bounded(y, kFuel500).verified()) << print(y);
  }
}

TEST(IsFpc, FreshVariableAvoidsFreeNames) {
  Term y = Term::app(lib::Theta(), Term::app(lib::K(), Term::var("x^")));
  auto v = is_fpc_bounded(y, Bounds{});
  EXPECT_NE(v.var, "x^");
}

TEST(IsWfpc, Examples) {
  EXPECT_TRUE(is_wfpc_bounded(psi("z"), 5, 1000).verified());
  EXPECT_TRUE(is_wfpc_bounded(upsilon("c"), 5, 1000).verified());
  auto i = is_wfpc_bounded(lib::I(), 1, 1000);
  EXPECT_TRUE(i.refuted());
  // Depth 1 only inspects the root node, which is x^ itself; depth 2 sees no child.
  EXPECT_TRUE(is_wfpc_bounded(lib::I(), 2, 1000).refuted());
}

TEST(IsWfpc, Refutations) {
  // \x. x M N: arity mismatch at the root.
  EXPECT_TRUE(is_wfpc_bounded(P("\\x. x x x"), 3, 100).refuted());
  // Head reduction of K Omega x^ ends in the cycle Omega.
  auto ko = is_wfpc_bounded(Term::app(lib::K(), lib::Omega()), 3, 100);
  EXPECT_TRUE(ko.refuted());
  // Fuel exhaustion is not a refutation.
  auto slow = is_wfpc_bounded(lib::Theta(), 3, 1);
  EXPECT_TRUE(slow.unknown());
}

TEST(IsWfpc, FpcImpliesWfpc) {
  for (const Term& y : {lib::Theta(), lib::Y_curry(), theta_param(lib::I()), Term::app(lib::Theta(), lib::Theta_gen())}) {
    ASSERT_TRUE(is_fpc_bounded(y, kFuel500).verified());
    EXPECT_TRUE(is_wfpc_bounded(y, 6, 1000).verified()) << print(y);
  }
}

TEST(IsWfpc, PsiAndUpsilonAreNotVerifiedFpcs) {
  EXPECT_FALSE(is_fpc_bounded(psi("z"), Bounds{}).verified());
  EXPECT_FALSE(is_fpc_bounded(upsilon("c"), Bounds{}).verified());
}

TEST(Unfold, Theta) {
  Term next = unfold_wfpc(lib::Theta(), 100);
  Term x = Term::var("x");
  EXPECT_EQ(next, Term::lam("x", Term::apps(lib::V(), {lib::V(), x})));
  EXPECT_TRUE(join_bounded(next, lib::Theta(), Bounds{}).joined());
}

TEST(Unfold, UpsilonStage) {
  Term next = unfold_wfpc(upsilon("c"), 100);
  Term x = Term::var("x");
  EXPECT_EQ(next, Term::lam("x", upsilon_stage(x, "c", 1)));
}

TEST(Unfold, Psi) {
  Term next = unfold_wfpc(psi("z"), 100);
  Term w = psi_builder("z");
  Term x = Term::var("x");
  EXPECT_EQ(next, Term::lam("x", Term::apps(w, {w, Term::app(Term::var("z"), lib::I()), x})));
}

TEST(Unfold, Errors) {
  try {
    unfold_wfpc(P("\\x. x x x"), 100);
    FAIL();
  } catch (const UnfoldError& e) {
    EXPECT_EQ(e.reason(), UnfoldError::Reason::Shape);
  }
  try {
    unfold_wfpc(Term::app(lib::K(), lib::Omega()), 50);
    FAIL();
  } catch (const UnfoldError& e) {
    EXPECT_EQ(e.reason(), UnfoldError::Reason::Fuel);
  }
}

TEST(Unfold, IteratedStagesJoin) {
  for (const Term& y : {lib::Theta(), lib::Y_curry(), psi("z"), upsilon("c")}) {
    ASSERT_TRUE(is_wfpc_bounded(y, 5, 1000).verified());
    std::string xn = fresh_name("x", {&y});
    Term x = Term::var(xn);
    Term stage = y;
    for (std::size_t k = 1; k <= 4; ++k) {
      stage = unfold_wfpc(stage, 1000);
      Term rhs = iterate(x, k, Term::app(stage, x));
      EXPECT_TRUE(join_bounded(Term::app(y, x), rhs, Bounds{}).joined()) << print(y) << " k=" << k;
    }
  }
}
