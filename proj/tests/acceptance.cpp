// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "natstrat/catalog.hpp"
#include "natstrat/checker.hpp"
#include "natstrat/dsl.hpp"
#include "natstrat/uppaal.hpp"
#include "support.hpp"

using namespace natstrat;
using catalog::CoercerVariant;
using catalog::VoterLevel;

namespace {

/// Collects mismatches for one criterion.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    ++count_;
    if (!ok) failures_.push_back(what);
  }
  template <typename T>
  void equal(const T& actual, const T& expected, const std::string& what) {
    std::ostringstream s;
    s << what << ": got " << actual << ", want " << expected;
    expect(actual == expected, s.str());
  }
  bool ok() const { return failures_.empty(); }
  std::size_t count() const { return count_; }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::size_t count_ = 0;
  std::vector<std::string> failures_;
};

Verdict verdictOf(const Bundle& b, const std::string& formula, int bound, const std::string& strategy = {}) {
  Formula f = b.requireFormula(formula).withBound(bound);
  if (!strategy.empty()) f = f.withStrategies({strategy});
  CheckOptions o;
  o.strategies = b.strategyTable();
  return evalFormula(b.network, b.network.initialState(), f, o).verdict;
}

int steps(const Bundle& b, const std::string& strategy, const GlobalState& from, const std::string& goal) {
  const StepResult r = stepsToGoal(b.network, from, CollectiveStrategy({b.requireStrategy(strategy)}),
                                   parseGuard(goal, b.network, -1));
  return r.bounded() ? r.steps : -1;
}

std::string verdictText(Verdict v) { return toString(v); }

// ------------------------------------------------------------------ criteria

void complexities(Checks& c) {
  const Bundle base = catalog::buildVoter(VoterLevel::Base);
  const Bundle check4 = catalog::buildVoter(VoterLevel::Check4);
  const Bundle full = catalog::buildVoter(VoterLevel::Full);
  const Bundle coercer = catalog::buildCoercer(CoercerVariant::InfectAndPunish);
  c.equal(complexity(base.requireStrategy("NS1")), 15, "NS1");
  c.equal(complexity(base.requireStrategy("NS2")), 21, "NS2");
  c.equal(complexity(check4.requireStrategy("NS3")), 17, "NS3");
  c.equal(complexity(full.requireStrategy("NS4")), 29, "NS4");
  c.equal(complexity(coercer.requireStrategy("CS1")), 16, "CS1");
  c.equal(complexity(coercer.requireStrategy("CS2")), 6, "CS2");
  c.equal(complexity(coercer.requireStrategy("CS3")), 7, "CS3");
}

void guardLengths(Checks& c) {
  const Bundle base = catalog::buildVoter(VoterLevel::Base);
  const Bundle coercer = catalog::buildCoercer(CoercerVariant::Punisher);
  const int v = base.network.agentIndex("v");
  c.equal(guardLength(parseGuard("check2_ok || check2_fail || out", base.network, v)), 5, "check2_ok|check2_fail|out");
  c.equal(guardLength(base.requireStrategy("NS1").cond(3)), 5, "NS1 rule 4");
  c.equal(guardLength(coercer.requireStrategy("CS1").cond(2)), 10, "CS1 punish guard");
  c.equal(guardLength(Guard::top()), 1, "true");
}

void verification(Checks& c) {
  const Bundle base = catalog::buildVoter(VoterLevel::Base);
  const Bundle check4 = catalog::buildVoter(VoterLevel::Check4);
  const Bundle full = catalog::buildVoter(VoterLevel::Full);
  c.equal(verdictText(verdictOf(base, "phi1", 15, "NS1")), std::string("true"), "phi1/NS1 k=15");
  c.equal(verdictText(verdictOf(base, "phi1", 14, "NS1")), std::string("false"), "phi1/NS1 k=14");
  c.equal(verdictText(verdictOf(base, "psi", 12, "NS1_psi")), std::string("true"), "psi k=12");
  c.equal(verdictText(verdictOf(base, "phi2", 21, "NS2")), std::string("true"), "phi2/NS2 k=21");
  c.equal(verdictText(verdictOf(check4, "phi3", 17, "NS3")), std::string("true"), "phi3/NS3 k=17");
  c.equal(verdictText(verdictOf(full, "phi4", 29, "NS4")), std::string("true"), "phi4/NS4 k=29");
  const Network fixed = fixStrategy(base.network, CollectiveStrategy({base.requireStrategy("NS1")}));
  c.equal(verdictText(evalFormula(fixed, fixed.initialState(), parseFormula("A F end", fixed)).verdict),
          std::string("true"), "AF end on NS1-fixed model");
  // psi strategy is NS1 without its 8th rule
  const NaturalStrategy& ns1 = base.requireStrategy("NS1");
  const NaturalStrategy& psi = base.requireStrategy("NS1_psi");
  bool dropped = psi.length() + 1 == ns1.length();
  for (std::size_t i = 0, j = 0; dropped && i < ns1.length(); ++i) {
    if (i == 7) continue;
    dropped = ns1.rules[i] == psi.rules[j++];
  }
  c.expect(dropped, "NS1_psi is NS1 minus rule 8");
}

void stepCounts(Checks& c) {
  const Bundle base = catalog::buildVoter(VoterLevel::Base);
  const Bundle check4 = catalog::buildVoter(VoterLevel::Check4);
  c.equal(steps(base, "NS1", catalog::stateAt(base.network, "v", "has_ballot"), "end"), 9, "NS1 -> end");
  c.equal(steps(check4, "NS3", check4.network.initialState(), "checked4 && checked4_1 && checked4_2"), 11,
          "NS3 -> triple check");
  for (auto [n, m] : {std::pair{1, 1}, {7, 5}}) {
    const Bundle full = catalog::buildVoter(VoterLevel::Full, n, m);
    const int want = 9 + (2 * n + 1) + (2 * m + 1);
    c.equal(steps(full, "NS4", catalog::stateAt(full.network, "v", "has_ballot"), "end"), want,
            "NS4 full(" + std::to_string(n) + "," + std::to_string(m) + ")");
  }
}

int safeMatch(const Network& net, const GlobalState& q, const NaturalStrategy& s) {
  try {
    return matchRule(net, q, s);
  } catch (const StrategyIllFormed&) {
    return -1;
  }
}

void transformations(Checks& c) {
  const auto bundles = oracle::catalogBundles();
  std::size_t states = 0;
  for (const auto& [name, b] : bundles) {
    const StateGraph g = exploreStateSpace(b.network, b.network.initialState());
    if (g.size() > 100'000) continue;
    for (const auto& s : b.strategies) {
      const NaturalStrategy me = makeMutuallyExclusive(s);
      std::size_t bad = 0;
      for (const auto& q : g.states())
        if (!oracle::shadowedBeforeMatch(b.network, q, s)) bad += safeMatch(b.network, q, s) != safeMatch(b.network, q, me);
      states += g.size();
      c.expect(bad == 0, name + "/" + s.name + ": matchRule changed in " + std::to_string(bad) + " states");
    }
  }
  c.expect(states > 1000, "too few states checked");

  const Bundle base = catalog::buildVoter(VoterLevel::Base);
  const NaturalStrategy me = makeMutuallyExclusive(base.requireStrategy("NS1"));
  const StateGraph g = exploreStateSpace(base.network, base.network.initialState());
  std::size_t overlaps = 0;
  for (const auto& q : g.states()) {
    int holding = 0;
    for (std::size_t i = 0; i + 1 < me.length(); ++i) holding += me.cond(i).eval(q);
    overlaps += holding > 1;
  }
  c.equal(overlaps, std::size_t{0}, "NS1 transformed guard overlaps");

  std::vector<std::pair<const Network*, NaturalStrategy>> pairs;
  const Bundle trap = oracle::parse(oracle::kTrapToy);
  const Bundle sign = oracle::parse(oracle::kSignToy);
  pairs.emplace_back(&trap.network, parseStrategy("when s0 do a; when true do *;", trap.network, "Player"));
  pairs.emplace_back(&trap.network, parseStrategy("when true do *;", trap.network, "Player"));
  pairs.emplace_back(&sign.network, parseStrategy("when sign do right; when true do left;", sign.network, "Player"));
  for (const auto& [name, b] : bundles)
    for (const auto& s : b.strategies) pairs.emplace_back(&b.network, s);
  std::size_t compared = 0;
  for (const auto& [net, s] : pairs) {
    const StateGraph full = exploreStateSpace(*net, net->initialState());
    if (full.size() > 10'000 || !auditAvailability(*net, full, s).strict()) continue;
    const CollectiveStrategy cs({s});
    const OutcomeGraph direct = outcomes(*net, net->initialState(), cs);
    const OutcomeGraph pruned = prunedOutcomes(*net, net->initialState(), cs);
    c.expect(oracle::edgeSet(*net, direct) == oracle::edgeSet(*net, pruned), "fixStrategy differs for " + s.name);
    ++compared;
  }
  c.expect(compared >= 6, "fewer than 6 pruned/direct comparisons");
}

void oracles(Checks& c) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> size(1, 200);
  int cases = 0;
  for (int attempt = 0; attempt < 3000 && cases < 150; ++attempt) {
    const StateGraph g = oracle::randomGraph(rng, size(rng));
    const auto a = oracle::randomSet(rng, g.size(), 0.7);
    const auto b = oracle::randomSet(rng, g.size(), 0.15);
    const auto f = oracle::naiveAF(g, 0, b);
    const auto gl = oracle::naiveAG(g, 0, a);
    const auto u = oracle::naiveAU(g, 0, a, b);
    if (!f.complete || !gl.complete || !u.complete) continue;
    ++cases;
    c.expect(checkTemporalUniversal(g, TemporalOp::Finally, b).holds == f.holds, "AF case " + std::to_string(cases));
    c.expect(checkTemporalUniversal(g, TemporalOp::Globally, a).holds == gl.holds, "AG case " + std::to_string(cases));
    c.expect(checkTemporalUniversal(g, TemporalOp::Until, a, b).holds == u.holds, "AU case " + std::to_string(cases));
  }
  c.expect(cases >= 100, "only " + std::to_string(cases) + " random cases completed");

  for (const auto& toy : oracle::synthToys()) {
    const Bundle b = oracle::parse(toy.source);
    const int agent = b.network.agentIndex(toy.agent);
    std::vector<Guard> atoms;
    for (const char* a : toy.atoms) atoms.push_back(parseGuard(a, b.network, agent));
    const Guard goal = parseGuard(toy.goal, b.network, -1);
    for (int k = 1; k <= 3; ++k) {
      const auto expected = oracle::bruteForceMinimum(b.network, agent, atoms, goal, k);
      CheckOptions o;
      o.synthesis.vocabulary = atoms;
      const Formula f =
          parseFormula(std::string("<<") + toy.agent + ">>^" + std::to_string(k) + " F " + toy.goal, b.network);
      const CheckResult r = synthesizeStrategic(b.network, b.network.initialState(), f, o);
      const std::string tag = std::string(toy.name) + " k=" + std::to_string(k);
      c.expect(r.holds() == expected.has_value(), tag + ": existence differs");
      if (expected && r.strategy) c.equal(complexity(*r.strategy), *expected, tag + " minimum");
    }
  }
}

void epistemic(Checks& c) {
  std::mt19937 rng(5);
  for (const auto& [name, b] : oracle::catalogBundles()) {
    const StateGraph g = exploreStateSpace(b.network, b.network.initialState());
    const std::size_t n = g.size();
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t a = 0; a < b.network.agents.size(); ++a) {
      const ObservationPartition p(b.network, g, static_cast<int>(a));
      bool relation = true;
      for (int k = 0; k < 200; ++k) {
        const int i = static_cast<int>(pick(rng)), j = static_cast<int>(pick(rng)), l = static_cast<int>(pick(rng));
        relation = relation && p.indistinguishable(i, i) && p.indistinguishable(i, j) == p.indistinguishable(j, i);
        if (p.indistinguishable(i, j) && p.indistinguishable(j, l)) relation = relation && p.indistinguishable(i, l);
      }
      c.expect(relation, name + ": indistinguishability is not an equivalence");
      const auto x = oracle::randomSet(rng, n, 0.9);
      const auto y = oracle::randomSet(rng, n, 0.9);
      std::vector<char> xy(n);
      for (std::size_t i = 0; i < n; ++i) xy[i] = x[i] && y[i];
      const auto kx = knowsSet(p, x), ky = knowsSet(p, y), kxy = knowsSet(p, xy);
      bool truth = true, conj = true;
      for (std::size_t i = 0; i < n; ++i) {
        truth = truth && (!kx[i] || x[i]);
        conj = conj && static_cast<bool>(kxy[i]) == (kx[i] && ky[i]);
      }
      c.expect(truth, name + ": K phi -> phi fails");
      c.expect(conj, name + ": K distributes over conjunction fails");
    }
  }

  CheckOptions synth;
  synth.mode = CheckMode::Synthesize;
  const Bundle leaky = catalog::buildLeakyToy();
  const CheckResult l = evalFormula(leaky.network, leaky.network.initialState(), leaky.requireFormula("rf"), synth);
  c.equal(verdictText(l.verdict), std::string("false"), "rf leaky toy");
  c.expect(!l.trace.empty() || l.strategy.has_value(), "rf leaky toy has no witness");
  const Bundle blind = catalog::buildBlindToy();
  const Formula rf = blind.requireFormula("rf");
  c.expect(rf.left().operand().bound() <= 4 && rf.right().operand().bound() <= 4, "rf bound above 4");
  c.equal(verdictText(evalFormula(blind.network, blind.network.initialState(), rf, synth).verdict),
          std::string("true"), "rf blind toy");
}

void exports(Checks& c) {
  std::size_t documents = 0;
  for (const auto& [name, b] : oracle::catalogBundles()) {
    std::vector<std::optional<CollectiveStrategy>> fixes{std::nullopt};
    for (const auto& s : b.strategies) fixes.emplace_back(CollectiveStrategy({s}));
    for (const auto& fix : fixes) {
      const UppaalDocument doc = exportUppaal(b.network, fix, b.formulas);
      const auto problems = doc.validate();
      c.expect(problems.empty(), name + ": " + (problems.empty() ? std::string() : problems.front()));
      try {
        oracle::parseXmlString(doc.xml());
      } catch (const std::exception& e) {
        c.expect(false, name + ": malformed XML: " + e.what());
      }
      ++documents;
    }
  }
  c.expect(documents > 15, "too few exports");
  const Bundle base = catalog::buildVoter(VoterLevel::Base);
  const UppaalDocument doc = exportUppaal(base.network, CollectiveStrategy({base.requireStrategy("NS1")}), base.formulas);
  c.expect(doc.queryFile().find("A<> Voter.end") != std::string::npos, "phi1 query is not A<> Voter.end");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<void(Checks&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "complexity regression", complexities},
      {2, "guard-length spot checks", guardLengths},
      {3, "verification regression", verification},
      {4, "step-count regression", stepCounts},
      {5, "transformation properties", transformations},
      {6, "checker oracle equivalence", oracles},
      {7, "epistemic axioms and receipt-freeness toys", epistemic},
      {8, "export validity", exports},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Checks checks;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(checks);
    } catch (const std::exception& e) {
      checks.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  [%d] %-44s %4zu checks  %.2fs\n", checks.ok() ? "PASS" : "FAIL", cr.id, cr.title,
                checks.count(), secs);
    for (const auto& f : checks.failures()) std::printf("        %s\n", f.c_str());
    failed += checks.ok() ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
