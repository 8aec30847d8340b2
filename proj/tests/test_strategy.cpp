#include <gtest/gtest.h>

#include <set>
#include <tuple>

#include "natstrat/catalog.hpp"
#include "natstrat/dsl.hpp"
#include "natstrat/outcome.hpp"
#include "natstrat/strategy.hpp"
#include "support.hpp"

using namespace natstrat;
using catalog::CoercerVariant;
using catalog::VoterLevel;

namespace {

const Bundle& base() {
  static const Bundle b = catalog::buildVoter(VoterLevel::Base);
  return b;
}

/// Every (network, strategy) pair shipped in the catalog.
std::vector<std::pair<const Network*, const NaturalStrategy*>> catalogStrategies(
    const std::vector<std::pair<std::string, Bundle>>& bundles) {
  std::vector<std::pair<const Network*, const NaturalStrategy*>> out;
  for (const auto& [name, b] : bundles)
    for (const auto& s : b.strategies) out.emplace_back(&b.network, &s);
  return out;
}

}  // namespace

TEST(Complexity, VoterAndCoercerValues) {
  EXPECT_EQ(complexity(base().requireStrategy("NS1")), 15);
  EXPECT_EQ(complexity(base().requireStrategy("NS2")), 21);
  EXPECT_EQ(complexity(catalog::buildVoter(VoterLevel::Check4).requireStrategy("NS3")), 17);
  EXPECT_EQ(complexity(catalog::buildVoter(VoterLevel::Full).requireStrategy("NS4")), 29);
  const Bundle c = catalog::buildCoercer(CoercerVariant::InfectAndPunish);
  EXPECT_EQ(complexity(c.requireStrategy("CS1")), 16);
  EXPECT_EQ(complexity(c.requireStrategy("CS2")), 6);
  EXPECT_EQ(complexity(c.requireStrategy("CS3")), 7);
}

TEST(Complexity, GuardLengths) {
  const Network& net = base().network;
  const int v = net.agentIndex("v");
  EXPECT_EQ(guardLength(parseGuard("check2_ok || check2_fail || out", net, v)), 5);
  EXPECT_EQ(guardLength(Guard::top()), 1);
  EXPECT_EQ(guardLength(parseGuard("!has_ballot", net, v)), 2);
  EXPECT_EQ(guardLength(parseGuard("counter == 0", net, v)), 1);
  EXPECT_EQ(guardLength(parseGuard("counter == 0", net, v), Convention::Literal), 3);
  EXPECT_EQ(guardLength(parseGuard("counter + 1 <= max_checks", net, v), Convention::Literal), 5);
}

TEST(Complexity, ConventionsDifferOnlyOnComparisons) {
  const ComplexityReport ns1 = complexityReport(base().requireStrategy("NS1"));
  EXPECT_FALSE(ns1.differs());
  const ComplexityReport ns2 = complexityReport(base().requireStrategy("NS2"));
  EXPECT_TRUE(ns2.differs());
  EXPECT_EQ(ns2.paper, 21);
  EXPECT_EQ(ns2.literal, 23);
}

TEST(CollectiveStrategy, OrderedAndUnique) {
  const Bundle b = catalog::buildLeakyToy();
  NaturalStrategy coerc = parseStrategy("when true do *;", b.network, "coerc");
  NaturalStrategy voter = parseStrategy("when true do vote1;", b.network, "voter");
  const CollectiveStrategy s({coerc, voter});
  EXPECT_EQ(s.coalition(), (std::vector<int>{b.network.agentIndex("voter"), b.network.agentIndex("coerc")}));
  EXPECT_EQ(complexity(s), 2);
  CollectiveStrategy t;
  t.add(voter);
  EXPECT_THROW(t.add(voter), DefinitionError);
}

TEST(MatchRule, FirstExecutableRuleWins) {
  const Network& net = base().network;
  const NaturalStrategy& ns2 = base().requireStrategy("NS2");
  const GlobalState atBallot = catalog::stateAt(net, "v", "has_ballot");
  EXPECT_EQ(matchRule(net, atBallot, ns2), 0);
  GlobalState checked = atBallot;
  checked.values[static_cast<std::size_t>(net.findVariable(0, "counter"))] = 1;
  EXPECT_EQ(matchRule(net, checked, ns2), 1);
  EXPECT_EQ(matchRule(net, net.initialState(), ns2), 10);
}

TEST(MatchRule, WildcardAndUnavailableActions) {
  const Bundle b = oracle::parse(oracle::kTrapToy);
  const Network& net = b.network;
  const NaturalStrategy onlyC = parseStrategy("when true do c;", net, "Player");
  EXPECT_THROW(matchRule(net, net.initialState(), onlyC), StrategyIllFormed);
  const NaturalStrategy fallback = parseStrategy("when s0 do c; when true do *;", net, "Player");
  EXPECT_EQ(matchRule(net, net.initialState(), fallback), 1);
  GlobalState atGoal = net.initialState();
  atGoal.locations[0] = net.agents[0].findLocation("goal");
  EXPECT_EQ(matchRule(net, atGoal, onlyC), 0);  // no action at all: vacuous
}

TEST(MatchRule, PartialStrategyFallsBackToWait) {
  const Bundle c = catalog::buildCoercer(CoercerVariant::Punisher);
  const NaturalStrategy& cs1 = c.requireStrategy("CS1");
  GlobalState q = c.network.initialState();
  EXPECT_EQ(matchRule(c.network, q, cs1), 0);
  q.values[static_cast<std::size_t>(c.network.findVariable(-1, "coerced_v"))] = 1;
  q.values[static_cast<std::size_t>(c.network.findVariable(-1, "requested_v"))] = 1;
  EXPECT_EQ(matchRule(c.network, q, cs1), static_cast<int>(cs1.length()));
}

TEST(Strategy, ObservabilityIsEnforced) {
  const Bundle b = catalog::buildBlindToy();
  EXPECT_THROW(parseStrategy("when choice == 1 do ask; when true do *;", b.network, "coerc"), DefinitionError);
  EXPECT_THROW(parseStrategy("when Env@fixed do ask; when true do *;", b.network, "coerc"), DefinitionError);
  EXPECT_NO_THROW(parseStrategy("when asked do *; when true do ask;", b.network, "coerc"));
  EXPECT_THROW(parseStrategy("when true do fly;", b.network, "coerc"), DefinitionError);
}

TEST(Strategy, PartialNeedsLazyAgent) {
  const Bundle b = oracle::parse(oracle::kTrapToy);
  EXPECT_THROW(parseStrategy("partial when s0 do a;", b.network, "Player"), DefinitionError);
}

TEST(MutualExclusion, MatchRuleIsInvariantOnEveryCatalogStrategy) {
  const auto bundles = oracle::catalogBundles();
  std::size_t checked = 0;
  std::size_t shadowed = 0;
  for (auto [net, s] : catalogStrategies(bundles)) {
    const NaturalStrategy me = makeMutuallyExclusive(*s);
    ASSERT_EQ(me.length(), s->length());
    EXPECT_TRUE(me.cond(me.length() - 1).isTrue() || s->partial);
    const StateGraph g = exploreStateSpace(*net, net->initialState());
    ASSERT_LE(g.size(), 100'000u);
    for (const auto& q : g.states()) {
      int a = -2;
      int b = -3;
      try {
        a = matchRule(*net, q, *s);
      } catch (const StrategyIllFormed&) {
        a = -1;
      }
      try {
        b = matchRule(*net, q, me);
      } catch (const StrategyIllFormed&) {
        b = -1;
      }
      if (oracle::shadowedBeforeMatch(*net, q, *s)) {
        ++shadowed;
        continue;
      }
      EXPECT_EQ(a, b) << s->name << " at " << net->describe(q);
      ++checked;
    }
  }
  EXPECT_LT(shadowed * 4, checked);
  EXPECT_GT(checked, 1000u);
}

TEST(MutualExclusion, TransformedNS1GuardsAreDisjoint) {
  const Network& net = base().network;
  const NaturalStrategy me = makeMutuallyExclusive(base().requireStrategy("NS1"));
  const StateGraph g = exploreStateSpace(net, net.initialState());
  for (const auto& q : g.states()) {
    int holding = 0;
    for (std::size_t i = 0; i + 1 < me.length(); ++i) holding += me.cond(i).eval(q) ? 1 : 0;
    EXPECT_LE(holding, 1) << net.describe(q);
  }
}

TEST(MutualExclusion, EffectiveGuardOfTheFinalRuleIsTheResidual) {
  const NaturalStrategy& ns1 = base().requireStrategy("NS1");
  const Guard last = effectiveGuard(ns1, ns1.length() - 1);
  const StateGraph g = exploreStateSpace(base().network, base().network.initialState());
  for (const auto& q : g.states()) {
    bool earlier = false;
    for (std::size_t i = 0; i + 1 < ns1.length(); ++i) earlier = earlier || ns1.cond(i).eval(q);
    EXPECT_EQ(last.eval(q), !earlier);
  }
}

TEST(FixStrategy, PrunedGraphEqualsDirectOutcomes) {
  const auto bundles = oracle::catalogBundles();
  std::vector<std::pair<Bundle, std::string>> toys;
  {
    Bundle trap = oracle::parse(oracle::kTrapToy);
    trap.strategies.push_back(parseStrategy("strategy Good for Player { when s0 do a; when true do *; }", trap.network));
    trap.strategies.push_back(parseStrategy("strategy Any for Player { when true do *; }", trap.network));
    toys.emplace_back(trap, "trap");
    Bundle sign = oracle::parse(oracle::kSignToy);
    sign.strategies.push_back(
        parseStrategy("strategy Read for Player { when sign do right; when true do left; }", sign.network));
    toys.emplace_back(sign, "sign");
  }
  std::size_t compared = 0;
  auto compare = [&](const Network& net, const NaturalStrategy& s) {
    const StateGraph full = exploreStateSpace(net, net.initialState());
    if (full.size() > 10'000) return;
    if (!auditAvailability(net, full, s).strict()) return;
    const CollectiveStrategy cs({s});
    const OutcomeGraph direct = outcomes(net, net.initialState(), cs);
    const OutcomeGraph pruned = prunedOutcomes(net, net.initialState(), cs);
    EXPECT_EQ(direct.size(), pruned.size()) << s.name;
    EXPECT_EQ(oracle::edgeSet(net, direct), oracle::edgeSet(net, pruned)) << s.name;
    ++compared;
  };
  for (const auto& [b, name] : toys)
    for (const auto& s : b.strategies) compare(b.network, s);
  for (const auto& [name, b] : bundles)
    for (const auto& s : b.strategies) compare(b.network, s);
  EXPECT_GE(compared, 6u);
}

TEST(FixStrategy, OnlyCoalitionEdgesAreRestricted) {
  const Bundle b = oracle::parse(oracle::kSignToy);
  const NaturalStrategy s = parseStrategy("when sign do right; when true do left;", b.network, "Player");
  const Network fixed = fixStrategy(b.network, CollectiveStrategy({s}));
  EXPECT_EQ(fixed.agents[0].edges, b.network.agents[0].edges);
  EXPECT_NE(fixed.agents[1].edges, b.network.agents[1].edges);
}

TEST(Audit, CatalogVoterStrategiesAlwaysMatch) {
  for (const auto& [name, b] : oracle::catalogBundles()) {
    const StateGraph g = exploreStateSpace(b.network, b.network.initialState());
    for (const auto& s : b.strategies) EXPECT_TRUE(auditAvailability(b.network, g, s).passed()) << name << " " << s.name;
  }
}

TEST(Strategy, ToStringShowsRules) {
  const std::string text = toString(base().requireStrategy("dispute"));
  EXPECT_NE(text.find("strategy dispute for v"), std::string::npos);
  EXPECT_NE(text.find("when check4_fail do signal_error;"), std::string::npos);
}
