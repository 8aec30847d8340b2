#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "natstrat/explore.hpp"
#include "natstrat/guard.hpp"
#include "natstrat/model.hpp"

namespace natstrat {

/// A concrete action label or the wildcard `*` (any available action).
struct StrategyAction {
  bool wildcard = false;
  std::string label;

  static StrategyAction any() { return StrategyAction{true, {}}; }
  static StrategyAction of(std::string label) { return StrategyAction{false, std::move(label)}; }
  std::string str() const { return wildcard ? "*" : label; }
  bool permits(const std::string& action) const { return wildcard || label == action; }

  friend bool operator==(const StrategyAction&, const StrategyAction&) = default;
};

struct Rule {
  Guard guard;
  StrategyAction action;
  SourceSpan span;

  friend bool operator==(const Rule& a, const Rule& b) { return a.guard == b.guard && a.action == b.action; }
};

/// Ordered guarded-command list for one agent; the first executable rule wins.
///
/// Complete strategies end in a `true` rule. A `partial` strategy lists only
/// its conditional rules and implicitly idles (`wait`) when none applies; the
/// implicit rule is not part of the list and costs nothing.
struct NaturalStrategy {
  std::string name;
  std::string agentName;
  int agent = -1;
  std::vector<Rule> rules;
  bool partial = false;

  std::size_t length() const { return rules.size(); }
  const Guard& cond(std::size_t i) const { return rules.at(i).guard; }
  const StrategyAction& act(std::size_t i) const { return rules.at(i).action; }

  friend bool operator==(const NaturalStrategy& a, const NaturalStrategy& b) {
    return a.name == b.name && a.agentName == b.agentName && a.agent == b.agent && a.rules == b.rules &&
           a.partial == b.partial;
  }
};

/// One natural strategy per coalition member, ordered by agent index.
class CollectiveStrategy {
 public:
  CollectiveStrategy() = default;
  explicit CollectiveStrategy(std::vector<NaturalStrategy> members);

  void add(NaturalStrategy s);
  const NaturalStrategy* forAgent(int agent) const;
  const std::vector<NaturalStrategy>& members() const { return members_; }
  std::vector<int> coalition() const;
  bool empty() const { return members_.empty(); }

  friend bool operator==(const CollectiveStrategy&, const CollectiveStrategy&) = default;

 private:
  std::vector<NaturalStrategy> members_;
};

/// How comparisons such as `i == n` are counted.
/// Paper: a comparison counts as one symbol, like an atom.
/// Literal: every operand and operator is a symbol.
enum class Convention { Paper, Literal };

int guardLength(const Guard& g, Convention convention = Convention::Paper);
int complexity(const NaturalStrategy& s, Convention convention = Convention::Paper);
int complexity(const CollectiveStrategy& s, Convention convention = Convention::Paper);

struct ComplexityReport {
  int paper = 0;
  int literal = 0;
  bool differs() const { return paper != literal; }
};
ComplexityReport complexityReport(const NaturalStrategy& s);

/// What a strategy lets its agent do in a state.
struct ActionChoice {
  bool any = false;
  std::string label;
  bool permits(const std::string& action) const { return any || label == action; }
};

/// Index of the first rule whose guard holds and whose action is available.
/// Returns `s.length()` for the implicit fallback of a partial strategy. An
/// agent with no available action at all matches vacuously (last rule).
/// Throws StrategyIllFormed if the agent can act but no rule applies.
int matchRule(const Network& net, const GlobalState& state, const NaturalStrategy& s);
int matchRule(const Network& net, const GlobalState& state, const std::vector<Move>& enabled,
              const NaturalStrategy& s);

ActionChoice chosenAction(const Network& net, const GlobalState& state, const std::vector<Move>& enabled,
                          const NaturalStrategy& s);

/// Conjoins the negations of all earlier guards onto every rule except a final `true`.
NaturalStrategy makeMutuallyExclusive(const NaturalStrategy& s);

/// Guard under which rule `i` fires in first-match order, ignoring availability.
/// For the final `true` rule (or the implicit fallback, i == length) this is
/// the negation of every earlier guard.
Guard effectiveGuard(const NaturalStrategy& s, std::size_t i);

/// Disjunction of effective guards of every rule permitting `action`.
Guard permissionGuard(const NaturalStrategy& s, const std::string& action);

/// Restricts each coalition agent's edges to the strategy (model pruning).
Network fixStrategy(const Network& net, const CollectiveStrategy& strategy);

/// Checks a strategy against its network. Throws DefinitionError.
void checkStrategyAgainst(const Network& net, const NaturalStrategy& s);
void checkCollectiveAgainst(const Network& net, const CollectiveStrategy& s);

struct AuditReport {
  std::vector<int> unmatchedStates;  // graph state ids where matchRule failed
  /// (rule index, state id): guard holds but the concrete action is unavailable
  std::vector<std::pair<int, int>> shadowed;
  bool passed() const { return unmatchedStates.empty(); }
  bool strict() const { return shadowed.empty(); }
};

AuditReport auditAvailability(const Network& net, const StateGraph& graph, const NaturalStrategy& s);

std::string toString(const NaturalStrategy& s);

}  // namespace natstrat
