#include "natstrat/model.hpp"

#include <algorithm>
#include <sstream>

namespace natstrat {

int AgentTemplate::findLocation(const std::string& loc) const {
  for (std::size_t i = 0; i < locations.size(); ++i)
    if (locations[i].name == loc) return static_cast<int>(i);
  return -1;
}

std::vector<int> AgentTemplate::locationsWithAtom(const std::string& atom) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < locations.size(); ++i) {
    const auto& l = locations[i];
    if (l.name == atom || std::find(l.labels.begin(), l.labels.end(), atom) != l.labels.end())
      out.push_back(static_cast<int>(i));
  }
  return out;
}

std::set<std::string> AgentTemplate::actionLabels() const {
  std::set<std::string> out;
  for (const auto& e : edges) out.insert(e.action);
  if (lazy) out.insert(kWaitAction);
  return out;
}

GlobalState Network::initialState() const {
  GlobalState s;
  s.locations.reserve(agents.size());
  for (const auto& a : agents) s.locations.push_back(a.initial);
  s.values.reserve(variables.size());
  for (const auto& v : variables) s.values.push_back(v.initial);
  return s;
}

int Network::findAgent(const std::string& nameOrAlias) const {
  for (std::size_t i = 0; i < agents.size(); ++i)
    if (agents[i].name == nameOrAlias) return static_cast<int>(i);
  for (std::size_t i = 0; i < agents.size(); ++i)
    if (!agents[i].alias.empty() && agents[i].alias == nameOrAlias) return static_cast<int>(i);
  return -1;
}

int Network::agentIndex(const std::string& nameOrAlias) const {
  int i = findAgent(nameOrAlias);
  if (i < 0) throw DefinitionError("unknown agent '" + nameOrAlias + "'");
  return i;
}

int Network::findChannel(const std::string& name) const {
  auto it = std::find(channels.begin(), channels.end(), name);
  return it == channels.end() ? -1 : static_cast<int>(it - channels.begin());
}

std::optional<int> Network::findConstant(const std::string& name) const {
  for (const auto& c : constants)
    if (c.name == name) return c.value;
  return std::nullopt;
}

int Network::findVariable(int agent, const std::string& name) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i].owner == agent && variables[i].name == name) return static_cast<int>(i);
  return -1;
}

bool Network::observable(int agent, int slot) const {
  int owner = variables.at(static_cast<std::size_t>(slot)).owner;
  return owner < 0 || owner == agent;
}

std::string Network::describe(const GlobalState& state) const {
  std::ostringstream out;
  out << '(';
  for (std::size_t a = 0; a < agents.size(); ++a) {
    if (a) out << ", ";
    out << agents[a].name << '@' << agents[a].locations.at(static_cast<std::size_t>(state.locations[a])).name;
  }
  bool first = true;
  for (std::size_t v = 0; v < variables.size(); ++v) {
    out << (first ? " | " : ", ");
    first = false;
    const auto& var = variables[v];
    if (var.owner >= 0) out << agents[static_cast<std::size_t>(var.owner)].name << '.';
    out << var.name << '=' << state.values[v];
  }
  out << ')';
  return out.str();
}

const std::string& locationName(const Network& net, const GlobalState& state, int agent) {
  const auto& a = net.agents.at(static_cast<std::size_t>(agent));
  return a.locations.at(static_cast<std::size_t>(state.locations.at(static_cast<std::size_t>(agent)))).name;
}

std::vector<std::string> validate(const Network& net) {
  std::vector<std::string> problems;
  for (std::size_t v = 0; v < net.variables.size(); ++v) {
    const auto& var = net.variables[v];
    if (var.lower > var.upper) problems.push_back("variable '" + var.name + "' has an empty range");
    if (var.initial < var.lower || var.initial > var.upper)
      problems.push_back("variable '" + var.name + "' starts outside its range");
  }
  for (std::size_t ai = 0; ai < net.agents.size(); ++ai) {
    const auto& a = net.agents[ai];
    int nloc = static_cast<int>(a.locations.size());
    if (nloc == 0) problems.push_back("agent '" + a.name + "' has no locations");
    if (a.initial < 0 || a.initial >= nloc) problems.push_back("agent '" + a.name + "' has no valid initial location");
    for (const auto& e : a.edges) {
      if (e.source < 0 || e.source >= nloc || e.target < 0 || e.target >= nloc)
        problems.push_back("agent '" + a.name + "': edge '" + e.action + "' references a missing location");
      if (e.sync.kind != SyncKind::None &&
          (e.sync.channel < 0 || e.sync.channel >= static_cast<int>(net.channels.size())))
        problems.push_back("agent '" + a.name + "': edge '" + e.action + "' uses an undeclared channel");
      for (const auto& u : e.updates) {
        if (!u.target.resolved() || u.target.slot >= static_cast<int>(net.variables.size())) {
          problems.push_back("agent '" + a.name + "': unresolved assignment target '" + u.target.str() + "'");
          continue;
        }
        int owner = net.variables[static_cast<std::size_t>(u.target.slot)].owner;
        if (owner >= 0 && owner != static_cast<int>(ai))
          problems.push_back("agent '" + a.name + "' writes another agent's local '" + u.target.str() + "'");
      }
    }
  }
  return problems;
}

}  // namespace natstrat
