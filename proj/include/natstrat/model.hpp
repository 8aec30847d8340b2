#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "natstrat/errors.hpp"
#include "natstrat/guard.hpp"
#include "natstrat/state.hpp"

namespace natstrat {

/// A bounded integer variable. `owner` is the agent index, or -1 for globals.
struct Variable {
  std::string name;
  int lower = 0;
  int upper = 0;
  int initial = 0;
  int owner = -1;

  bool isBoolean() const { return lower == 0 && upper == 1; }
  friend bool operator==(const Variable&, const Variable&) = default;
};

struct Location {
  std::string name;
  std::vector<std::string> labels;

  friend bool operator==(const Location&, const Location&) = default;
};

enum class SyncKind { None, Send, Receive };

struct Sync {
  SyncKind kind = SyncKind::None;
  int channel = -1;

  friend bool operator==(const Sync&, const Sync&) = default;
};

struct Assignment {
  VarRef target;
  IntExpr value;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct Edge {
  int source = 0;
  int target = 0;
  Guard guard;
  Sync sync;
  std::vector<Assignment> updates;
  std::string action;
  SourceSpan span;

  friend bool operator==(const Edge& a, const Edge& b) {
    return a.source == b.source && a.target == b.target && a.guard == b.guard && a.sync == b.sync &&
           a.updates == b.updates && a.action == b.action;
  }
};

inline constexpr const char* kWaitAction = "wait";

/// One agent's local automaton. Every agent instance owns its own template.
struct AgentTemplate {
  std::string name;
  std::string alias;
  bool lazy = false;
  std::vector<Location> locations;
  int initial = 0;
  std::vector<int> localVars;  // slots into Network::variables
  std::vector<Edge> edges;
  /// Condition under which the implicit `wait` loop of a lazy agent is enabled.
  Guard waitGuard;
  SourceSpan span;

  int findLocation(const std::string& loc) const;
  /// Every location whose name or label list matches `atom`.
  std::vector<int> locationsWithAtom(const std::string& atom) const;
  /// Distinct action labels on edges, plus `wait` for lazy agents.
  std::set<std::string> actionLabels() const;

  friend bool operator==(const AgentTemplate& a, const AgentTemplate& b) {
    return a.name == b.name && a.alias == b.alias && a.lazy == b.lazy && a.locations == b.locations &&
           a.initial == b.initial && a.localVars == b.localVars && a.edges == b.edges &&
           a.waitGuard == b.waitGuard;
  }
};

struct Constant {
  std::string name;
  int value = 0;

  friend bool operator==(const Constant&, const Constant&) = default;
};

/// Parallel composition of agents sharing global variables and binary channels.
class Network {
 public:
  std::vector<Constant> constants;
  std::vector<std::string> channels;
  std::vector<Variable> variables;  // globals first, then locals grouped by agent
  std::vector<AgentTemplate> agents;

  GlobalState initialState() const;

  /// Agent index by name or alias; -1 if absent.
  int findAgent(const std::string& nameOrAlias) const;
  /// Agent index by name or alias; throws DefinitionError if absent.
  int agentIndex(const std::string& nameOrAlias) const;
  int findChannel(const std::string& name) const;
  std::optional<int> findConstant(const std::string& name) const;
  /// Slot of a local of `agent` (if agent >= 0) or of a global.
  int findVariable(int agent, const std::string& name) const;
  bool isGlobal(int slot) const { return variables.at(static_cast<std::size_t>(slot)).owner < 0; }

  /// Slot is readable by `agent` under the observability rule (own locals + globals).
  bool observable(int agent, int slot) const;

  std::string describe(const GlobalState& state) const;

  friend bool operator==(const Network&, const Network&) = default;
};

/// Location of `agent` in `state`, by name.
const std::string& locationName(const Network& net, const GlobalState& state, int agent);

/// Exception-free structural check; empty result means the network is well formed.
std::vector<std::string> validate(const Network& net);

}  // namespace natstrat
