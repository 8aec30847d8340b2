#include "natstrat/strategy.hpp"

#include <algorithm>
#include <sstream>

namespace natstrat {

CollectiveStrategy::CollectiveStrategy(std::vector<NaturalStrategy> members) {
  for (auto& m : members) add(std::move(m));
}

void CollectiveStrategy::add(NaturalStrategy s) {
  if (s.agent < 0) throw DefinitionError("strategy '" + s.name + "' is not bound to an agent");
  if (forAgent(s.agent))
    throw DefinitionError("coalition already has a strategy for agent '" + s.agentName + "'");
  auto pos = std::lower_bound(members_.begin(), members_.end(), s.agent,
                              [](const NaturalStrategy& m, int a) { return m.agent < a; });
  members_.insert(pos, std::move(s));
}

const NaturalStrategy* CollectiveStrategy::forAgent(int agent) const {
  for (const auto& m : members_)
    if (m.agent == agent) return &m;
  return nullptr;
}

std::vector<int> CollectiveStrategy::coalition() const {
  std::vector<int> out;
  for (const auto& m : members_) out.push_back(m.agent);
  return out;
}

int guardLength(const Guard& g, Convention convention) {
  switch (g.kind()) {
    case Guard::Kind::True:
    case Guard::Kind::Location:
    case Guard::Kind::Variable:
    case Guard::Kind::Name: return 1;
    case Guard::Kind::Compare:
      if (convention == Convention::Paper) return 1;
      return g.lhsExpr().symbolCount() + 1 + g.rhsExpr().symbolCount();
    case Guard::Kind::Not: return 1 + guardLength(g.operand(), convention);
    case Guard::Kind::And:
    case Guard::Kind::Or: return 1 + guardLength(g.left(), convention) + guardLength(g.right(), convention);
  }
  return 0;
}

int complexity(const NaturalStrategy& s, Convention convention) {
  int total = 0;
  for (const auto& r : s.rules) total += guardLength(r.guard, convention);
  return total;
}

int complexity(const CollectiveStrategy& s, Convention convention) {
  int total = 0;
  for (const auto& m : s.members()) total += complexity(m, convention);
  return total;
}

ComplexityReport complexityReport(const NaturalStrategy& s) {
  return ComplexityReport{complexity(s, Convention::Paper), complexity(s, Convention::Literal)};
}

int matchRule(const Network& net, const GlobalState& state, const std::vector<Move>& enabled,
              const NaturalStrategy& s) {
  const auto available = availableActions(net, state, enabled, s.agent);
  for (std::size_t i = 0; i < s.rules.size(); ++i) {
    const Rule& r = s.rules[i];
    if (!r.guard.eval(state)) continue;
    if (r.action.wildcard ? !available.empty() : available.count(r.action.label) > 0)
      return static_cast<int>(i);
  }
  if (s.partial) return static_cast<int>(s.rules.size());
  if (available.empty() && !s.rules.empty()) return static_cast<int>(s.rules.size()) - 1;
  throw StrategyIllFormed("strategy '" + s.name + "' has no executable rule in state " + net.describe(state));
}

int matchRule(const Network& net, const GlobalState& state, const NaturalStrategy& s) {
  return matchRule(net, state, enabledMoves(net, state), s);
}

ActionChoice chosenAction(const Network& net, const GlobalState& state, const std::vector<Move>& enabled,
                          const NaturalStrategy& s) {
  const int i = matchRule(net, state, enabled, s);
  if (i == static_cast<int>(s.rules.size())) return ActionChoice{false, kWaitAction};
  const auto& a = s.rules[static_cast<std::size_t>(i)].action;
  return ActionChoice{a.wildcard, a.label};
}

NaturalStrategy makeMutuallyExclusive(const NaturalStrategy& s) {
  NaturalStrategy out = s;
  std::vector<Guard> negatedPrefix;
  for (std::size_t i = 0; i < s.rules.size(); ++i) {
    const Guard& g = s.rules[i].guard;
    const bool finalTop = !s.partial && i + 1 == s.rules.size() && g.isTrue();
    if (!finalTop && !negatedPrefix.empty()) {
      std::vector<Guard> parts = negatedPrefix;
      parts.push_back(g);
      out.rules[i].guard = conjunction(parts);
    }
    negatedPrefix.push_back(Guard::negate(g));
  }
  return out;
}

Guard effectiveGuard(const NaturalStrategy& s, std::size_t i) {
  const bool residual = i >= s.rules.size() || (!s.partial && i + 1 == s.rules.size() && s.rules[i].guard.isTrue());
  std::vector<Guard> parts;
  const std::size_t prefix = std::min(i, s.rules.size());
  for (std::size_t j = 0; j < prefix; ++j) parts.push_back(Guard::negate(s.rules[j].guard));
  if (!residual) parts.push_back(s.rules[i].guard);
  return conjunction(parts);
}

Guard permissionGuard(const NaturalStrategy& s, const std::string& action) {
  std::vector<Guard> parts;
  for (std::size_t i = 0; i < s.rules.size(); ++i)
    if (s.rules[i].action.permits(action)) parts.push_back(effectiveGuard(s, i));
  if (s.partial && action == kWaitAction) parts.push_back(effectiveGuard(s, s.rules.size()));
  return disjunction(parts);
}

namespace {

void checkObservable(const Network& net, int agent, const Guard& g, const SourceSpan& span) {
  auto where = [&](const Guard& node) { return node.span().known() ? node.span() : span; };
  auto checkVars = [&](const IntExpr& e, const Guard& node) {
    std::vector<VarRef> refs;
    e.collectVars(refs);
    for (const auto& r : refs)
      if (!net.observable(agent, r.slot))
        throw DefinitionError("variable '" + r.str() + "' is not observable by agent '" +
                                  net.agents[static_cast<std::size_t>(agent)].name + "'",
                              where(node));
  };
  switch (g.kind()) {
    case Guard::Kind::True: return;
    case Guard::Kind::Name: throw DefinitionError("unresolved atom '" + g.text() + "'", where(g));
    case Guard::Kind::Location:
      if (g.agent() != agent)
        throw DefinitionError("atom '" + g.text() + "' is another agent's location", where(g));
      return;
    case Guard::Kind::Variable:
      if (!net.observable(agent, g.var().slot))
        throw DefinitionError("variable '" + g.var().str() + "' is not observable by agent '" +
                                  net.agents[static_cast<std::size_t>(agent)].name + "'",
                              where(g));
      return;
    case Guard::Kind::Compare:
      checkVars(g.lhsExpr(), g);
      checkVars(g.rhsExpr(), g);
      return;
    case Guard::Kind::Not: checkObservable(net, agent, g.operand(), span); return;
    case Guard::Kind::And:
    case Guard::Kind::Or:
      checkObservable(net, agent, g.left(), span);
      checkObservable(net, agent, g.right(), span);
      return;
  }
}

}  // namespace

void checkStrategyAgainst(const Network& net, const NaturalStrategy& s) {
  if (s.agent < 0 || s.agent >= static_cast<int>(net.agents.size()))
    throw DefinitionError("strategy '" + s.name + "' refers to unknown agent '" + s.agentName + "'");
  if (s.rules.empty()) throw DefinitionError("strategy '" + s.name + "' has no rules");
  const auto& agent = net.agents[static_cast<std::size_t>(s.agent)];
  if (!s.partial && !s.rules.back().guard.isTrue())
    throw DefinitionError("strategy '" + s.name + "' must end with a 'when true' rule", s.rules.back().span);
  if (s.partial && !agent.lazy)
    throw DefinitionError("partial strategy '" + s.name + "' needs a lazy agent to idle", s.rules.front().span);
  const auto labels = agent.actionLabels();
  for (const auto& r : s.rules) checkObservable(net, s.agent, r.guard, r.span);
  for (const auto& r : s.rules)
    if (!r.action.wildcard && !labels.count(r.action.label))
      throw DefinitionError("agent '" + agent.name + "' has no action '" + r.action.label + "'", r.span);
}

void checkCollectiveAgainst(const Network& net, const CollectiveStrategy& s) {
  for (const auto& m : s.members()) checkStrategyAgainst(net, m);
}

Network fixStrategy(const Network& net, const CollectiveStrategy& strategy) {
  checkCollectiveAgainst(net, strategy);
  Network out = net;
  for (const auto& s : strategy.members()) {
    auto& agent = out.agents[static_cast<std::size_t>(s.agent)];
    for (auto& e : agent.edges) {
      Guard permit = permissionGuard(s, e.action);
      if (!permit.isTrue()) e.guard = e.guard.isTrue() ? permit : Guard::conj(e.guard, permit);
    }
    if (agent.lazy) {
      Guard permit = permissionGuard(s, kWaitAction);
      if (!permit.isTrue())
        agent.waitGuard = agent.waitGuard.isTrue() ? permit : Guard::conj(agent.waitGuard, permit);
    }
  }
  return out;
}

AuditReport auditAvailability(const Network& net, const StateGraph& graph, const NaturalStrategy& s) {
  AuditReport report;
  for (int id = 0; id < static_cast<int>(graph.size()); ++id) {
    const GlobalState& q = graph.state(id);
    const auto enabled = enabledMoves(net, q);
    try {
      (void)matchRule(net, q, enabled, s);
    } catch (const StrategyIllFormed&) {
      report.unmatchedStates.push_back(id);
    }
    const auto available = availableActions(net, q, enabled, s.agent);
    for (std::size_t i = 0; i < s.rules.size(); ++i) {
      const Rule& r = s.rules[i];
      if (r.action.wildcard || !r.guard.eval(q)) continue;
      if (!available.count(r.action.label)) report.shadowed.emplace_back(static_cast<int>(i), id);
    }
  }
  return report;
}

std::string toString(const NaturalStrategy& s) {
  std::ostringstream out;
  out << "strategy " << (s.name.empty() ? "unnamed" : s.name);
  if (!s.agentName.empty()) out << " for " << s.agentName;
  if (s.partial) out << " partial";
  out << " {\n";
  for (const auto& r : s.rules) out << "  when " << r.guard.str() << " do " << r.action.str() << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace natstrat
