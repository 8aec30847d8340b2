#include "natstrat/catalog.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <tuple>
#include <utility>

#include "natstrat/checker.hpp"
#include "natstrat/outcome.hpp"

namespace natstrat {
namespace detail {
extern const std::vector<std::pair<std::string, std::string>> kEmbeddedModels;
}

namespace catalog {

const char* toString(VoterLevel level) {
  switch (level) {
    case VoterLevel::Base: return "base";
    case VoterLevel::Check4: return "check4";
    case VoterLevel::Full: return "full";
  }
  return "?";
}

const char* toString(CoercerVariant variant) {
  switch (variant) {
    case CoercerVariant::Punisher: return "punisher";
    case CoercerVariant::Infector: return "infector";
    case CoercerVariant::InfectAndPunish: return "infectAndPunish";
  }
  return "?";
}

CoercerVariant parseCoercerVariant(const std::string& name) {
  for (auto v : {CoercerVariant::Punisher, CoercerVariant::Infector, CoercerVariant::InfectAndPunish})
    if (name == toString(v)) return v;
  throw DefinitionError("unknown coercer variant '" + name + "' (expected punisher, infector or infectAndPunish)");
}

std::vector<std::string> files() {
  std::vector<std::string> out;
  for (const auto& [name, text] : detail::kEmbeddedModels) out.push_back(name);
  std::sort(out.begin(), out.end());
  return out;
}

const std::string& source(const std::string& file) {
  for (const auto& [name, text] : detail::kEmbeddedModels)
    if (name == file) return text;
  throw DefinitionError("no catalog file '" + file + "'");
}

SourceLoader loader() {
  return [](const std::string& path) { return source(path); };
}

Bundle load(const std::string& file, const std::map<std::string, int>& constants) {
  LoadOptions options;
  options.constants = constants;
  options.loader = loader();
  return loadBundle(file, options);
}

Bundle buildVoter(VoterLevel level, int n, int m) {
  switch (level) {
    case VoterLevel::Base: return load("voter_base.nsq");
    case VoterLevel::Check4: return load("voter_check4.nsq");
    case VoterLevel::Full:
      if (n < 1 || m < 1)
        throw DefinitionError("full voter level needs n >= 1 and m >= 1, got n = " + std::to_string(n) +
                              ", m = " + std::to_string(m));
      return load("voter_full.nsq", {{"n", n}, {"m", m}});
  }
  throw DefinitionError("unknown voter level");
}

Bundle buildInfrastructure() { return load("infrastructure.nsm"); }

Bundle buildCoercer(CoercerVariant variant, bool obedient) {
  const bool punish = variant != CoercerVariant::Infector;
  const bool infect = variant != CoercerVariant::Punisher;
  return load("coercion.nsq", {{"can_punish", punish ? 1 : 0}, {"can_infect", infect ? 1 : 0},
                                {"obedience", obedient ? 1 : 0}});
}

Bundle buildLeakyToy() { return load("rf_leaky.nsm"); }
Bundle buildBlindToy() { return load("rf_blind.nsm"); }

GlobalState stateAt(const Network& net, const std::string& agent, const std::string& location) {
  const int a = net.agentIndex(agent);
  const int loc = net.agents[static_cast<std::size_t>(a)].findLocation(location);
  if (loc < 0) throw DefinitionError("agent '" + agent + "' has no location '" + location + "'");
  GlobalState s = net.initialState();
  s.locations[static_cast<std::size_t>(a)] = loc;
  return s;
}

namespace {

struct Computed {
  std::string actual;
  std::string detail;
};

struct Row {
  ExpectedMetric metric;
  std::function<Computed(const ExploreOptions&)> compute;
};

Computed complexityOf(const Bundle& b, const std::string& strategy) {
  return {std::to_string(complexity(b.requireStrategy(strategy))), {}};
}

Computed guardLengthOf(const Bundle& b, const std::string& strategy, std::size_t rule) {
  const auto& s = b.requireStrategy(strategy);
  return {std::to_string(guardLength(s.cond(rule))), s.cond(rule).str()};
}

Computed verdictOf(const Bundle& b, const Formula& f, const ExploreOptions& explore,
                   CheckMode mode = CheckMode::Verify) {
  CheckOptions options;
  options.mode = mode;
  options.strategies = b.strategyTable();
  options.explore = explore;
  const CheckResult r = evalFormula(b.network, b.network.initialState(), f, options);
  std::string detail = r.reason;
  if (r.strategy) {
    for (const auto& s : r.strategy->members()) {
      if (!detail.empty()) detail += "; ";
      detail += s.name + " (complexity " + std::to_string(complexity(s)) + ")";
    }
  }
  return {toString(r.verdict), detail};
}

Computed verdictOf(const Bundle& b, const std::string& formula, const ExploreOptions& explore,
                   CheckMode mode = CheckMode::Verify) {
  return verdictOf(b, b.requireFormula(formula), explore, mode);
}

Computed stepsOf(const Bundle& b, const std::string& strategy, const GlobalState& from, const std::string& goal,
                 const ExploreOptions& explore) {
  const CollectiveStrategy s({b.requireStrategy(strategy)});
  const StepResult r = stepsToGoal(b.network, from, s, parseGuard(goal, b.network, -1), explore);
  if (!r.bounded()) return {toString(r.kind), {}};
  return {std::to_string(r.steps), {}};
}

Row row(std::string id, std::string kind, std::string description, std::string expected,
        std::function<Computed(const ExploreOptions&)> compute) {
  return Row{ExpectedMetric{std::move(id), std::move(kind), std::move(description), std::move(expected)},
             std::move(compute)};
}

const std::vector<Row>& rows() {
  static const std::vector<Row> table = [] {
    using VL = VoterLevel;
    using CV = CoercerVariant;
    const auto base = [] { return buildVoter(VL::Base); };
    const auto check4 = [] { return buildVoter(VL::Check4); };
    const auto full = [] { return buildVoter(VL::Full); };
    std::vector<Row> t;

    t.push_back(row("complexity/NS1", "complexity", "NS1", "15", [=](auto&) { return complexityOf(base(), "NS1"); }));
    t.push_back(row("complexity/NS2", "complexity", "NS2", "21", [=](auto&) { return complexityOf(base(), "NS2"); }));
    t.push_back(row("complexity/NS3", "complexity", "NS3", "17", [=](auto&) { return complexityOf(check4(), "NS3"); }));
    t.push_back(row("complexity/NS4", "complexity", "NS4", "29", [=](auto&) { return complexityOf(full(), "NS4"); }));
    t.push_back(row("complexity/NS1_psi", "complexity", "NS1 without the finish rule", "12",
                    [=](auto&) { return complexityOf(base(), "NS1_psi"); }));
    for (auto [name, value] : {std::pair{"CS1", "16"}, {"CS2", "6"}, {"CS3", "7"}}) {
      const std::string n = name;
      t.push_back(row("complexity/" + n, "complexity", n, value,
                      [n](auto&) { return complexityOf(buildCoercer(CV::InfectAndPunish), n); }));
    }

    t.push_back(row("guard-length/NS1.4", "guard-length", "check2_ok || check2_fail || out", "5",
                    [=](auto&) { return guardLengthOf(base(), "NS1", 3); }));
    t.push_back(row("guard-length/CS1.3", "guard-length", "CS1 punish guard", "10",
                    [](auto&) { return guardLengthOf(buildCoercer(CV::Punisher), "CS1", 2); }));
    t.push_back(row("guard-length/true", "guard-length", "true", "1",
                    [=](auto&) { return guardLengthOf(base(), "NS1", 8); }));

    t.push_back(row("verdict/phi1", "verdict", "<<v>>^15[NS1] F end", "true",
                    [=](auto& e) { return verdictOf(base(), "phi1", e); }));
    t.push_back(row("verdict/phi1@14", "verdict", "<<v>>^14[NS1] F end", "false", [=](auto& e) {
      const Bundle b = base();
      return verdictOf(b, b.requireFormula("phi1").withBound(14), e);
    }));
    t.push_back(row("verdict/psi", "verdict", "<<v>>^12[NS1_psi] F (check4_ok || check4_fail)", "true",
                    [=](auto& e) { return verdictOf(base(), "psi", e); }));
    t.push_back(row("verdict/phi2", "verdict", "<<v>>^21[NS2] F (checked1 && checked3 && end)", "true",
                    [=](auto& e) { return verdictOf(base(), "phi2", e); }));
    t.push_back(row("verdict/phi3", "verdict", "<<v>>^17[NS3] F (checked4 && checked4_1 && checked4_2)", "true",
                    [=](auto& e) { return verdictOf(check4(), "phi3", e); }));
    t.push_back(row("verdict/phi4", "verdict", "<<v>>^29[NS4] F (all serial and preference latches)", "true",
                    [=](auto& e) { return verdictOf(full(), "phi4", e); }));
    t.push_back(row("verdict/AF-end-fixed", "verdict", "A F end on the NS1-fixed voter", "true", [=](auto& e) {
      const Bundle b = base();
      Bundle fixed;
      fixed.network = fixStrategy(b.network, CollectiveStrategy({b.requireStrategy("NS1")}));
      return verdictOf(fixed, parseFormula("A F end", fixed.network), e);
    }));
    t.push_back(row("verdict/phi1-check4", "verdict", "phi1 on the check4 level", "true",
                    [=](auto& e) { return verdictOf(check4(), "phi1", e); }));
    t.push_back(row("verdict/phi1-full", "verdict", "phi1 on the full level", "true",
                    [=](auto& e) { return verdictOf(full(), "phi1", e); }));
    t.push_back(row("verdict/dispute", "verdict", "A G (check4_fail -> <<v>>^2[dispute] F error)", "true",
                    [=](auto& e) { return verdictOf(base(), "dispute_resolution", e); }));
    t.push_back(row("verdict/CS1-punishes", "verdict", "punisher under CS1 can punish a disobedient voter", "true",
                    [](auto& e) { return verdictOf(buildCoercer(CV::Punisher), "cs1_can_punish", e); }));
    t.push_back(row("verdict/CS2-replaces", "verdict", "infector under CS2 replaces the vote", "true",
                    [](auto& e) { return verdictOf(buildCoercer(CV::Infector), "cs2_replaces", e); }));
    t.push_back(row("verdict/CS3-punishes", "verdict", "infecting punisher under CS3 can punish", "true",
                    [](auto& e) { return verdictOf(buildCoercer(CV::InfectAndPunish), "cs3_can_punish", e); }));
    t.push_back(row("verdict/rf-leaky", "verdict", "receipt-freeness, coercer sees the vote", "false",
                    [](auto& e) { return verdictOf(buildLeakyToy(), "rf", e, CheckMode::Synthesize); }));
    t.push_back(row("verdict/rf-blind", "verdict", "receipt-freeness, vote hidden from the coercer", "true",
                    [](auto& e) { return verdictOf(buildBlindToy(), "rf", e, CheckMode::Synthesize); }));

    t.push_back(row("steps/NS1", "steps", "NS1 from has_ballot to end", "9", [=](auto& e) {
      const Bundle b = base();
      return stepsOf(b, "NS1", stateAt(b.network, "v", "has_ballot"), "end", e);
    }));
    t.push_back(row("steps/NS3", "steps", "NS3 from start to checked4 && checked4_1 && checked4_2", "11",
                    [=](auto& e) {
                      const Bundle b = check4();
                      return stepsOf(b, "NS3", b.network.initialState(), "checked4 && checked4_1 && checked4_2", e);
                    }));
    t.push_back(row("steps/NS2", "steps", "NS2 from has_ballot to end", "13", [=](auto& e) {
      const Bundle b = base();
      return stepsOf(b, "NS2", stateAt(b.network, "v", "has_ballot"), "end", e);
    }));
    for (auto [n, m, expected] : {std::tuple{1, 1, "15"}, {7, 5, "35"}}) {
      t.push_back(row("steps/NS4(" + std::to_string(n) + "," + std::to_string(m) + ")", "steps",
                      "NS4 from has_ballot to end, n = " + std::to_string(n) + ", m = " + std::to_string(m),
                      expected, [n, m](auto& e) {
                        const Bundle b = buildVoter(VoterLevel::Full, n, m);
                        return stepsOf(b, "NS4", stateAt(b.network, "v", "has_ballot"), "end", e);
                      }));
    }
    return t;
  }();
  return table;
}

}  // namespace

const std::vector<ExpectedMetric>& expectedMetrics() {
  static const std::vector<ExpectedMetric> metrics = [] {
    std::vector<ExpectedMetric> out;
    for (const auto& r : rows()) out.push_back(r.metric);
    return out;
  }();
  return metrics;
}

std::vector<MetricResult> runCaseStudy(const ExploreOptions& explore) {
  std::vector<MetricResult> out;
  for (const auto& r : rows()) {
    const auto t0 = std::chrono::steady_clock::now();
    MetricResult result;
    result.metric = r.metric;
    try {
      Computed c = r.compute(explore);
      result.actual = std::move(c.actual);
      result.detail = std::move(c.detail);
    } catch (const std::exception& ex) {
      result.actual = "error";
      result.detail = ex.what();
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(result));
  }
  return out;
}

}  // namespace catalog
}  // namespace natstrat
