#include <gtest/gtest.h>

#include "fpclab/boehm.hpp"
#include "fpclab/combinators.hpp"
#include "fpclab/reduction.hpp"
#include "support.hpp"

using namespace fpclab;
using testing_support::P;

TEST(Named, Examples) {
  EXPECT_EQ(named("delta"), parse("\\y x. x (y x)"));
  EXPECT_EQ(named("I"), parse("\\x. x"));
  EXPECT_EQ(named("K"), parse("\\x y. x"));
  EXPECT_EQ(named("C"), parse("\\f x y. f y x"));
  EXPECT_EQ(named("C_3"), parse("\\x y. x (x (x y))"));
  EXPECT_EQ(named("C_0"), parse("\\x y. y"));
  EXPECT_EQ(named("Y_curry"), named("Y"));
  EXPECT_EQ(named("theta"), lib::Theta());
  EXPECT_THROW(named("nope"), UnknownCombinator);
  EXPECT_THROW(named("C_x"), UnknownCombinator);
}

TEST(Named, EveryListedNameResolves) {
  for (const auto& n : combinator_names()) {
    if (n == "C_k") continue;
    EXPECT_NO_THROW(named(n)) << n;
  }
}

TEST(Named, ClosedExceptParameters) {
  for (const auto& n : combinator_names()) {
    if (n == "C_k" || n == "Psi" || n == "Upsilon") continue;
    EXPECT_TRUE(named(n).closed()) << n;
  }
  EXPECT_EQ(free_vars(named("Psi")), std::set<std::string>{"z"});
  EXPECT_EQ(free_vars(named("Upsilon")), std::set<std::string>{"c"});
}

TEST(Named, ThetaEquation) {
  Term x = Term::var("x");
  Term tx = Term::app(named("Theta"), x);
  EXPECT_TRUE(join_bounded(tx, Term::app(x, tx), Bounds{}).joined());
}

TEST(Named, QEquationIsAReduction) {
  Term y = Term::var("y"), z = Term::var("z");
  Term lhs = Term::apps(lib::Q(), {y, z});
  Term rhs = Term::app(z, Term::apps(y, {lib::Q(), z}));
  EXPECT_TRUE(join_bounded(lhs, rhs, Bounds{}).joined());
  EXPECT_TRUE(reduces_to(lhs, rhs, Bounds{}));
}

TEST(ParseWithLibrary, ResolvesNames) {
  EXPECT_EQ(parse_with_library("THETA x"), Term::app(lib::Theta(), Term::var("x")));
  EXPECT_EQ(parse_with_library("Theta x"), Term::app(lib::Theta(), Term::var("x")));
  // Single lower-case letters and bound names stay variables.
  EXPECT_EQ(parse_with_library("c x"), P("c x"));
  EXPECT_EQ(parse_with_library("\\K. K"), lib::I());
}

TEST(DefiningEquations, AllJoinWithinFiftySteps) {
  auto eqs = defining_equations();
  EXPECT_GE(eqs.size(), 18u);
  for (const auto& e : eqs) {
    auto v = join_bounded(e.lhs, e.rhs, Bounds{50, 20000, 4000});
    EXPECT_TRUE(v.joined()) << e.name << ": " << print(e.lhs) << " = " << print(e.rhs);
  }
}

TEST(DefiningEquations, HoldByReductionExceptCurry) {
  for (const auto& e : defining_equations()) {
    if (e.name == "Y_curry") continue;
    EXPECT_TRUE(reduces_to(e.lhs, e.rhs, Bounds{200, 20000, 4000})) << e.name;
  }
}

TEST(DefiningEquations, SwapsOfC) {
  Term ck = Term::app(lib::C(), lib::K());
  EXPECT_TRUE(join_bounded(ck, Term::app(lib::K(), lib::I()), Bounds{200, 20000, 4000}).joined());
  EXPECT_TRUE(join_bounded(Term::app(lib::C(), ck), lib::K(), Bounds{200, 20000, 4000}).joined());
}

TEST(ThetaParam, Examples) {
  Term x = Term::var("x");
  Term ti = theta_param(lib::I());
  EXPECT_TRUE(join_bounded(Term::app(ti, x), Term::app(x, Term::app(ti, x)), Bounds{}).joined());
  EXPECT_EQ(join_bounded(theta_param(lib::I()), theta_param(lib::K()), Bounds{}).kind,
            JoinVerdict::Kind::NotJoinedWithin);
  EXPECT_EQ(free_vars(theta_param(Term::var("z"))), std::set<std::string>{"z"});
}

TEST(Psi, ApproximantAndEquation) {
  Term x = Term::var("x");
  EXPECT_EQ(render(approximant(Term::app(psi("z"), x), 3, 1000)), "x (x (x ⊥))");
  // W_z W_z p x reduces to x (W_z W_z (z p) x).
  Term w = psi_builder("z");
  Term p = Term::var("p");
  Term lhs = Term::apps(w, {w, p, x});
  Term rhs = Term::app(x, Term::apps(w, {w, Term::app(Term::var("z"), p), x}));
  EXPECT_TRUE(reduces_to(lhs, rhs, Bounds{}));
}

TEST(Upsilon, Stages) {
  Term x = Term::var("x");
  Term ux = Term::app(upsilon("c"), x);
  Term s0 = upsilon_stage(x, "c", 0);
  Term vx = upsilon_builder(x, "c");
  EXPECT_EQ(s0, Term::apps(vx, {lib::I(), vx}));
  EXPECT_EQ(upsilon_stage(x, "c", 1), Term::apps(vx, {Term::app(Term::var("c"), lib::I()), vx}));
  // Head reduction passes through V_x I V_x, then reaches x (V_x (c I) V_x).
  auto h = head_normal_form(ux, 20);
  ASSERT_TRUE(h.solved);
  EXPECT_EQ(*h.last, Term::app(x, upsilon_stage(x, "c", 1)));
  EXPECT_TRUE(reduces_to(ux, s0, Bounds{}));
  EXPECT_EQ(join_bounded(ux, Term::app(x, ux), Bounds{}).kind, JoinVerdict::Kind::NotJoinedWithin);
}

TEST(Iterate, DeltaPowers) {
  Term x = Term::var("x"), z = Term::var("z");
  Term lhs = Term::app(iterate(lib::delta(), 2, z), x);
  EXPECT_TRUE(join_bounded(lhs, P("x (x (z x))"), Bounds{}).joined());
  for (std::size_t k = 0; k <= 4; ++k)
    EXPECT_TRUE(join_bounded(Term::app(iterate(lib::delta(), k, z), x), iterate(x, k, Term::app(z, x)), Bounds{}).joined())
        << k;
}

TEST(Pair, Combinator) {
  Term p = Term::var("p"), q = Term::var("q"), z = Term::var("z");
  EXPECT_EQ(lib::pair(p, q), P("\\z. z p q"));
  EXPECT_TRUE(join_bounded(Term::apps(lib::pair_combinator(), {p, q}), lib::pair(p, q), Bounds{}).joined());
}
