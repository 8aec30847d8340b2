#include "natstrat/semantics.hpp"

#include <sstream>
#include <stdexcept>

namespace natstrat {

int Move::edgeOf(int a) const {
  if (a == agent) return edge;
  if (a == partnerAgent) return partnerEdge;
  throw std::logic_error("agent does not take part in move");
}

const std::string& actionOf(const Network& net, const Move& move, int agent) {
  static const std::string wait = kWaitAction;
  int e = move.edgeOf(agent);
  if (e == kWaitEdge) return wait;
  return net.agents.at(static_cast<std::size_t>(agent)).edges.at(static_cast<std::size_t>(e)).action;
}

std::string describe(const Network& net, const Move& move) {
  std::ostringstream out;
  out << net.agents.at(static_cast<std::size_t>(move.agent)).name << '.' << actionOf(net, move, move.agent);
  if (move.isSync()) {
    out << " <" << net.channels.at(static_cast<std::size_t>(move.channel)) << "> "
        << net.agents.at(static_cast<std::size_t>(move.partnerAgent)).name << '.'
        << actionOf(net, move, move.partnerAgent);
  }
  return out.str();
}

namespace {
bool edgeEnabled(const Edge& e, int currentLoc, const GlobalState& s) {
  return e.source == currentLoc && e.guard.eval(s);
}
}  // namespace

std::vector<Move> enabledMoves(const Network& net, const GlobalState& state) {
  std::vector<Move> moves;
  const int n = static_cast<int>(net.agents.size());
  for (int a = 0; a < n; ++a) {
    const auto& agent = net.agents[static_cast<std::size_t>(a)];
    const int here = state.locations[static_cast<std::size_t>(a)];
    for (int ei = 0; ei < static_cast<int>(agent.edges.size()); ++ei) {
      const Edge& e = agent.edges[static_cast<std::size_t>(ei)];
      if (e.sync.kind == SyncKind::Receive || !edgeEnabled(e, here, state)) continue;
      if (e.sync.kind == SyncKind::None) {
        moves.push_back(Move{a, ei});
        continue;
      }
      for (int b = 0; b < n; ++b) {
        if (b == a) continue;
        const auto& other = net.agents[static_cast<std::size_t>(b)];
        const int there = state.locations[static_cast<std::size_t>(b)];
        for (int fi = 0; fi < static_cast<int>(other.edges.size()); ++fi) {
          const Edge& f = other.edges[static_cast<std::size_t>(fi)];
          if (f.sync.kind != SyncKind::Receive || f.sync.channel != e.sync.channel) continue;
          if (!edgeEnabled(f, there, state)) continue;
          moves.push_back(Move{a, ei, b, fi, e.sync.channel});
        }
      }
    }
    if (agent.lazy && agent.waitGuard.eval(state)) moves.push_back(Move{a, kWaitEdge});
  }
  return moves;
}

namespace {
void applyUpdates(const Network& net, const Edge& e, int agent, GlobalState& s) {
  for (const auto& u : e.updates) {
    const int value = u.value.eval(s.values);
    const auto& var = net.variables.at(static_cast<std::size_t>(u.target.slot));
    if (value < var.lower || value > var.upper) {
      std::ostringstream msg;
      msg << "bound violation: " << net.agents[static_cast<std::size_t>(agent)].name << " edge '" << e.action
          << "' assigns " << value << " to '" << u.target.str() << "' with range [" << var.lower << ','
          << var.upper << "] in state " << net.describe(s);
      throw BoundViolation(msg.str());
    }
    s.values[static_cast<std::size_t>(u.target.slot)] = value;
  }
}
}  // namespace

GlobalState applyMove(const Network& net, const GlobalState& state, const Move& move) {
  if (move.isWait()) return state;
  GlobalState next = state;
  const Edge& e = net.agents.at(static_cast<std::size_t>(move.agent)).edges.at(static_cast<std::size_t>(move.edge));
  next.locations[static_cast<std::size_t>(move.agent)] = e.target;
  if (move.isSync()) {
    const Edge& f = net.agents.at(static_cast<std::size_t>(move.partnerAgent))
                        .edges.at(static_cast<std::size_t>(move.partnerEdge));
    next.locations[static_cast<std::size_t>(move.partnerAgent)] = f.target;
    applyUpdates(net, e, move.agent, next);
    applyUpdates(net, f, move.partnerAgent, next);
  } else {
    applyUpdates(net, e, move.agent, next);
  }
  return next;
}

std::set<std::string> availableActions(const Network& net, const GlobalState& /*state*/,
                                       const std::vector<Move>& enabled, int agent) {
  std::set<std::string> out;
  for (const auto& m : enabled)
    if (m.involves(agent)) out.insert(actionOf(net, m, agent));
  return out;
}

std::set<std::string> availableActions(const Network& net, const GlobalState& state, int agent) {
  if (agent < 0 || agent >= static_cast<int>(net.agents.size()))
    throw DefinitionError("unknown agent index " + std::to_string(agent));
  return availableActions(net, state, enabledMoves(net, state), agent);
}

}  // namespace natstrat
