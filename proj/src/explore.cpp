#include "natstrat/explore.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <set>

namespace natstrat {

int StateGraph::add(const GlobalState& s) {
  auto [it, inserted] = index_.try_emplace(s, static_cast<int>(states_.size()));
  if (inserted) {
    states_.push_back(s);
    succ_.emplace_back();
  }
  return it->second;
}

int StateGraph::find(const GlobalState& s) const {
  auto it = index_.find(s);
  return it == index_.end() ? -1 : it->second;
}

std::size_t StateGraph::transitionCount() const {
  std::size_t n = 0;
  for (const auto& v : succ_) n += v.size();
  return n;
}

std::vector<int> StateGraph::successorIds(int id) const {
  std::vector<int> out;
  for (const auto& t : successors(id)) out.push_back(t.target);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

StateGraph exploreWith(const Network& net, const GlobalState& from, const MoveGenerator& moves,
                       const ExploreOptions& options) {
  StateGraph g;
  std::mt19937 rng(options.seed);
  g.add(from);
  std::deque<int> frontier{0};
  while (!frontier.empty()) {
    const int id = frontier.front();
    frontier.pop_front();
    const GlobalState current = g.state(id);
    std::vector<Move> ms = moves(current);
    if (options.seed != 0) std::shuffle(ms.begin(), ms.end(), rng);
    std::vector<Transition> out;
    out.reserve(ms.size());
    for (const auto& m : ms) {
      GlobalState next = applyMove(net, current, m);
      const std::size_t before = g.size();
      const int target = g.add(next);
      if (g.size() > before) {
        if (g.size() > options.stateCap)
          throw ResourceLimit("state cap of " + std::to_string(options.stateCap) + " exceeded", g.size());
        frontier.push_back(target);
      }
      out.push_back(Transition{target, m});
    }
    g.successors(id) = std::move(out);
  }
  return g;
}

StateGraph exploreStateSpace(const Network& net, const GlobalState& from, const ExploreOptions& options) {
  return exploreWith(net, from, [&net](const GlobalState& s) { return enabledMoves(net, s); }, options);
}

}  // namespace natstrat
