#pragma once

#include <set>
#include <string>
#include <vector>

#include "natstrat/model.hpp"

namespace natstrat {

/// Edge index standing for the implicit `wait` self-loop of a lazy agent.
inline constexpr int kWaitEdge = -1;

/// Internal move (one agent, one edge or `wait`) or a channel handshake.
struct Move {
  int agent = -1;
  int edge = kWaitEdge;
  int partnerAgent = -1;  // receiver when synchronised
  int partnerEdge = -1;
  int channel = -1;

  bool isWait() const { return edge == kWaitEdge; }
  bool isSync() const { return partnerAgent >= 0; }
  bool involves(int a) const { return agent == a || partnerAgent == a; }
  /// Edge index the given agent takes in this move; throws if not involved.
  int edgeOf(int a) const;

  friend bool operator==(const Move&, const Move&) = default;
};

std::string describe(const Network& net, const Move& move);
/// Action label executed by `agent` in `move` (`wait` for idling).
const std::string& actionOf(const Network& net, const Move& move, int agent);

std::vector<Move> enabledMoves(const Network& net, const GlobalState& state);

/// Applies updates in edge order (sender before receiver). Throws BoundViolation.
GlobalState applyMove(const Network& net, const GlobalState& state, const Move& move);

/// Labels the agent can execute now, including its side of enabled handshakes.
std::set<std::string> availableActions(const Network& net, const GlobalState& state, int agent);
std::set<std::string> availableActions(const Network& net, const GlobalState& state,
                                       const std::vector<Move>& enabled, int agent);

}  // namespace natstrat
