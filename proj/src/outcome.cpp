#include "natstrat/outcome.hpp"

#include <algorithm>

namespace natstrat {

bool OutcomeGraph::inCoalition(int agent) const {
  return std::find(coalition.begin(), coalition.end(), agent) != coalition.end();
}

bool OutcomeGraph::coalitionActs(const Move& move) const {
  return inCoalition(move.agent) || (move.isSync() && inCoalition(move.partnerAgent));
}

std::vector<Move> strategyMoves(const Network& net, const GlobalState& state, const CollectiveStrategy& strategy) {
  const auto enabled = enabledMoves(net, state);
  std::vector<std::pair<int, ActionChoice>> choices;
  for (const auto& s : strategy.members()) choices.emplace_back(s.agent, chosenAction(net, state, enabled, s));

  std::vector<Move> out;
  for (const auto& m : enabled) {
    if (m.isWait()) continue;
    bool allowed = true;
    for (const auto& [agent, choice] : choices)
      if (m.involves(agent) && !choice.permits(actionOf(net, m, agent))) {
        allowed = false;
        break;
      }
    if (allowed) out.push_back(m);
  }
  return out;
}

OutcomeGraph outcomes(const Network& net, const GlobalState& from, const CollectiveStrategy& strategy,
                      const ExploreOptions& options) {
  checkCollectiveAgainst(net, strategy);
  OutcomeGraph out;
  out.coalition = strategy.coalition();
  out.graph = exploreWith(
      net, from, [&](const GlobalState& q) { return strategyMoves(net, q, strategy); }, options);
  return out;
}

OutcomeGraph prunedOutcomes(const Network& net, const GlobalState& from, const CollectiveStrategy& strategy,
                            const ExploreOptions& options) {
  const Network fixed = fixStrategy(net, strategy);
  OutcomeGraph out;
  out.coalition = strategy.coalition();
  out.graph = exploreWith(
      fixed, from,
      [&](const GlobalState& q) {
        auto moves = enabledMoves(fixed, q);
        std::erase_if(moves, [](const Move& m) { return m.isWait(); });
        return moves;
      },
      options);
  return out;
}

const char* toString(StepResult::Kind kind) {
  switch (kind) {
    case StepResult::Kind::Steps: return "steps";
    case StepResult::Kind::Unreachable: return "unreachable";
    case StepResult::Kind::Unbounded: return "unbounded";
  }
  return "?";
}

StepResult stepsToGoal(const OutcomeGraph& outcome, const Guard& goal) {
  const StateGraph& g = outcome.graph;
  const int n = static_cast<int>(g.size());
  StepResult result;
  if (n == 0) return result;

  std::vector<char> isGoal(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) isGoal[static_cast<std::size_t>(i)] = goal.eval(g.state(i));

  // Iterative DFS over non-goal states; goal states are leaves of depth 0.
  enum : char { White, Grey, Black };
  std::vector<char> colour(static_cast<std::size_t>(n), White);
  std::vector<int> depth(static_cast<std::size_t>(n), 0);
  std::vector<int> best(static_cast<std::size_t>(n), -1);  // successor attaining depth
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) succ[static_cast<std::size_t>(i)] = g.successorIds(i);

  struct Frame {
    int state;
    std::size_t next;
  };
  std::vector<Frame> stack{{0, 0}};
  std::vector<int> onStack;
  std::optional<Path> terminalWitness;
  std::optional<Path> lassoWitness;

  auto currentPath = [&]() {
    Path p;
    for (const auto& f : stack) p.states.push_back(f.state);
    return p;
  };

  colour[0] = Grey;
  while (!stack.empty()) {
    Frame& top = stack.back();
    const auto u = static_cast<std::size_t>(top.state);
    if (isGoal[u]) {
      colour[u] = Black;
      depth[u] = 0;
      stack.pop_back();
      continue;
    }
    if (top.next == 0 && succ[u].empty() && !terminalWitness) terminalWitness = currentPath();
    if (top.next < succ[u].size()) {
      const int v = succ[u][top.next++];
      const auto vi = static_cast<std::size_t>(v);
      if (colour[vi] == White) {
        colour[vi] = Grey;
        stack.push_back({v, 0});
      } else if (colour[vi] == Grey && !lassoWitness) {
        Path p = currentPath();
        p.loopStart = static_cast<int>(
            std::find(p.states.begin(), p.states.end(), v) - p.states.begin());
        lassoWitness = p;
      }
      continue;
    }
    int d = 0;
    for (int v : succ[u]) {
      const auto vi = static_cast<std::size_t>(v);
      if (colour[vi] == Black && depth[vi] + 1 > d) {
        d = depth[vi] + 1;
        best[u] = v;
      }
    }
    depth[u] = d;
    colour[u] = Black;
    stack.pop_back();
  }

  if (terminalWitness) {
    result.kind = StepResult::Kind::Unreachable;
    result.witness = *terminalWitness;
    return result;
  }
  if (lassoWitness) {
    result.kind = StepResult::Kind::Unbounded;
    result.witness = *lassoWitness;
    return result;
  }
  result.steps = depth[0];
  for (int s = 0; s >= 0; s = best[static_cast<std::size_t>(s)]) result.witness.states.push_back(s);
  return result;
}

StepResult stepsToGoal(const Network& net, const GlobalState& from, const CollectiveStrategy& strategy,
                       const Guard& goal, const ExploreOptions& options) {
  return stepsToGoal(outcomes(net, from, strategy, options), goal);
}

}  // namespace natstrat
