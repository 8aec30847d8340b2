#pragma once

#include <cstddef>
#include <functional>
#include <unordered_map>
#include <vector>

#include "natstrat/semantics.hpp"

namespace natstrat {

struct Transition {
  int target = 0;
  Move move;
};

/// Explicit reachable state graph; state 0 is the exploration root.
class StateGraph {
 public:
  int add(const GlobalState& s);  // returns id; inserts if new
  int find(const GlobalState& s) const;
  std::size_t size() const { return states_.size(); }
  std::size_t transitionCount() const;

  const GlobalState& state(int id) const { return states_.at(static_cast<std::size_t>(id)); }
  const std::vector<GlobalState>& states() const { return states_; }
  const std::vector<Transition>& successors(int id) const { return succ_.at(static_cast<std::size_t>(id)); }
  std::vector<Transition>& successors(int id) { return succ_.at(static_cast<std::size_t>(id)); }
  bool terminal(int id) const { return successors(id).empty(); }

  /// Distinct successor ids (parallel transitions collapsed).
  std::vector<int> successorIds(int id) const;

 private:
  std::vector<GlobalState> states_;
  std::vector<std::vector<Transition>> succ_;
  std::unordered_map<GlobalState, int, GlobalStateHash> index_;
};

struct ExploreOptions {
  std::size_t stateCap = 2'000'000;
  /// Non-zero: successor order is shuffled with this seed. Affects state numbering only.
  unsigned seed = 0;
};

/// Move generator used by exploration; defaults to enabledMoves.
using MoveGenerator = std::function<std::vector<Move>(const GlobalState&)>;

/// Breadth-first exploration of every state reachable from `from`.
/// Throws ResourceLimit when more than `stateCap` states are found.
StateGraph exploreStateSpace(const Network& net, const GlobalState& from, const ExploreOptions& options = {});
StateGraph exploreWith(const Network& net, const GlobalState& from, const MoveGenerator& moves,
                       const ExploreOptions& options = {});

}  // namespace natstrat
