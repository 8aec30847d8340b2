#pragma once

#include <optional>
#include <string>
#include <vector>

#include "natstrat/explore.hpp"
#include "natstrat/strategy.hpp"

namespace natstrat {

/// Finite path through a graph, optionally closing into a loop at `loopStart`.
struct Path {
  std::vector<int> states;
  int loopStart = -1;

  bool isLasso() const { return loopStart >= 0; }
  bool empty() const { return states.empty(); }
};

/// Graph of out(q, s_A): state 0 is q. Implicit `wait` loops are omitted, so a
/// state where only idling is possible is terminal and stutters.
struct OutcomeGraph {
  StateGraph graph;
  std::vector<int> coalition;

  bool inCoalition(int agent) const;
  /// True if a coalition member takes part in the move.
  bool coalitionActs(const Move& move) const;
  std::size_t size() const { return graph.size(); }
};

/// Moves allowed at `state` when the coalition follows `strategy`; never contains waits.
std::vector<Move> strategyMoves(const Network& net, const GlobalState& state, const CollectiveStrategy& strategy);

OutcomeGraph outcomes(const Network& net, const GlobalState& from, const CollectiveStrategy& strategy,
                      const ExploreOptions& options = {});

/// Exploration of fixStrategy(net, strategy) from `from`, without waits.
OutcomeGraph prunedOutcomes(const Network& net, const GlobalState& from, const CollectiveStrategy& strategy,
                            const ExploreOptions& options = {});

struct StepResult {
  enum class Kind { Steps, Unreachable, Unbounded };
  Kind kind = Kind::Steps;
  int steps = 0;
  /// For Steps: a path whose first goal state is at index `steps`.
  /// Unreachable: a path ending in a terminal non-goal state. Unbounded: a lasso.
  Path witness;

  bool bounded() const { return kind == Kind::Steps; }
};

const char* toString(StepResult::Kind kind);

/// Worst case, over all maximal paths of the outcome graph, of the first goal index.
StepResult stepsToGoal(const OutcomeGraph& outcome, const Guard& goal);
StepResult stepsToGoal(const Network& net, const GlobalState& from, const CollectiveStrategy& strategy,
                       const Guard& goal, const ExploreOptions& options = {});

}  // namespace natstrat
