#include <gtest/gtest.h>

#include "natstrat/catalog.hpp"
#include "natstrat/dsl.hpp"
#include "natstrat/outcome.hpp"
#include "support.hpp"

using namespace natstrat;
using catalog::VoterLevel;

namespace {

StepResult steps(const Bundle& b, const std::string& strategy, const GlobalState& from, const std::string& goal) {
  return stepsToGoal(b.network, from, CollectiveStrategy({b.requireStrategy(strategy)}),
                     parseGuard(goal, b.network, -1));
}

}  // namespace

TEST(Outcomes, StrategyRestrictsOnlyTheCoalition) {
  const Bundle b = oracle::parse(oracle::kSignToy);
  const NaturalStrategy s = parseStrategy("when sign do right; when true do left;", b.network, "Player");
  const OutcomeGraph o = outcomes(b.network, b.network.initialState(), CollectiveStrategy({s}));
  EXPECT_EQ(o.coalition, (std::vector<int>{1}));
  // both signs are posted, and the player always turns correctly
  const Guard trap = parseGuard("trap", b.network, -1);
  const Guard goal = parseGuard("goal", b.network, -1);
  int goals = 0;
  for (const auto& q : o.graph.states()) {
    EXPECT_FALSE(trap.eval(q));
    goals += goal.eval(q) ? 1 : 0;
  }
  EXPECT_EQ(goals, 2);
}

TEST(Outcomes, WaitLoopsAreNotPartOfOutcomes) {
  const Bundle b = catalog::buildVoter(VoterLevel::Base);
  const OutcomeGraph o = outcomes(b.network, b.network.initialState(), CollectiveStrategy{});
  for (std::size_t i = 0; i < o.size(); ++i)
    for (const auto& t : o.graph.successors(static_cast<int>(i))) EXPECT_FALSE(t.move.isWait());
}

TEST(Outcomes, StrategyMovesNeverContainWaits) {
  const Bundle b = catalog::buildCoercer(catalog::CoercerVariant::Punisher);
  const CollectiveStrategy s({b.requireStrategy("CS1")});
  const StateGraph g = exploreStateSpace(b.network, b.network.initialState());
  for (const auto& q : g.states())
    for (const auto& m : strategyMoves(b.network, q, s)) EXPECT_FALSE(m.isWait());
}

TEST(Outcomes, CoalitionMustBeFollowedExactly) {
  const Bundle b = oracle::parse(oracle::kTrapToy);
  const CollectiveStrategy good({parseStrategy("when s0 do a; when true do *;", b.network, "Player")});
  const OutcomeGraph o = outcomes(b.network, b.network.initialState(), good);
  EXPECT_EQ(o.size(), 2u);
  EXPECT_TRUE(o.coalitionActs(o.graph.successors(0).at(0).move));
}

TEST(StepsToGoal, VoterCounts) {
  const Bundle base = catalog::buildVoter(VoterLevel::Base);
  const GlobalState ballot = catalog::stateAt(base.network, "v", "has_ballot");
  const StepResult ns1 = steps(base, "NS1", ballot, "end");
  ASSERT_TRUE(ns1.bounded());
  EXPECT_EQ(ns1.steps, 9);
  EXPECT_EQ(ns1.witness.states.size(), 10u);
  EXPECT_EQ(steps(base, "NS1", base.network.initialState(), "check4").steps, 9);
  EXPECT_EQ(steps(base, "NS2", ballot, "end").steps, 13);

  const Bundle check4 = catalog::buildVoter(VoterLevel::Check4);
  EXPECT_EQ(steps(check4, "NS3", check4.network.initialState(), "checked4 && checked4_1 && checked4_2").steps, 11);
}

TEST(StepsToGoal, ClosedFormForTheFullLevel) {
  for (int n = 1; n <= 4; ++n) {
    for (int m = 1; m <= 3; ++m) {
      const Bundle b = catalog::buildVoter(VoterLevel::Full, n, m);
      const StepResult r = steps(b, "NS4", catalog::stateAt(b.network, "v", "has_ballot"), "end");
      ASSERT_TRUE(r.bounded());
      EXPECT_EQ(r.steps, 9 + (2 * n + 1) + (2 * m + 1)) << n << "," << m;
    }
  }
}

TEST(StepsToGoal, SerialLoopForOneSymbolHasThreeTransitions) {
  const Bundle b = catalog::buildVoter(VoterLevel::Full, 1, 1);
  const StepResult r = steps(b, "NS4", catalog::stateAt(b.network, "v", "check4"), "check4_1");
  ASSERT_TRUE(r.bounded());
  EXPECT_EQ(r.steps, 3);
}

TEST(StepsToGoal, UnreachableAndUnbounded) {
  const Bundle b = oracle::parse(oracle::kTrapToy);
  const Guard goal = parseGuard("goal", b.network, -1);

  const CollectiveStrategy toTrapAndStop({parseStrategy("when s0 do b; when true do *;", b.network, "Player")});
  const StepResult loop = stepsToGoal(b.network, b.network.initialState(), toTrapAndStop, goal);
  EXPECT_EQ(loop.kind, StepResult::Kind::Unbounded);
  EXPECT_TRUE(loop.witness.isLasso());

  const Bundle dead = parseBundle("agent A { loc s, t, goal; init s; edge s -> t on x; }");
  const StepResult stuck = stepsToGoal(dead.network, dead.network.initialState(),
                                       CollectiveStrategy({parseStrategy("when true do *;", dead.network, "A")}),
                                       parseGuard("goal", dead.network, -1));
  EXPECT_EQ(stuck.kind, StepResult::Kind::Unreachable);
  EXPECT_EQ(stuck.witness.states.size(), 2u);
  EXPECT_FALSE(stuck.witness.isLasso());
}

TEST(StepsToGoal, GoalAtTheStartIsZeroSteps) {
  const Bundle b = oracle::parse(oracle::kTwoStateToy);
  const StepResult r = stepsToGoal(b.network, b.network.initialState(),
                                   CollectiveStrategy({parseStrategy("when true do a;", b.network, "Robot")}),
                                   parseGuard("s0", b.network, -1));
  ASSERT_TRUE(r.bounded());
  EXPECT_EQ(r.steps, 0);
}

TEST(StepsToGoal, KindNames) {
  EXPECT_STREQ(toString(StepResult::Kind::Steps), "steps");
  EXPECT_STREQ(toString(StepResult::Kind::Unreachable), "unreachable");
  EXPECT_STREQ(toString(StepResult::Kind::Unbounded), "unbounded");
}
