#include <sstream>

#include "natstrat/dsl.hpp"

namespace natstrat {

namespace {

void printVar(std::ostringstream& out, const Variable& v) {
  out << "int[" << v.lower << ", " << v.upper << "] " << v.name;
  if (v.initial != v.lower) out << " = " << v.initial;
  out << ";\n";
}

void printAgent(std::ostringstream& out, const Network& net, const AgentTemplate& a) {
  out << "agent " << a.name;
  if (a.lazy) out << "(lazy)";
  if (!a.alias.empty()) out << " alias " << a.alias;
  out << " {\n";
  for (int slot : a.localVars) {
    out << "  var ";
    printVar(out, net.variables.at(static_cast<std::size_t>(slot)));
  }
  for (const auto& l : a.locations) {
    out << "  loc " << l.name;
    if (!l.labels.empty()) {
      out << " [";
      for (std::size_t i = 0; i < l.labels.size(); ++i) out << (i ? ", " : "") << l.labels[i];
      out << ']';
    }
    out << ";\n";
  }
  out << "  init " << a.locations.at(static_cast<std::size_t>(a.initial)).name << ";\n";
  if (a.lazy && !a.waitGuard.isTrue()) out << "  wait when " << a.waitGuard.str() << ";\n";
  for (const auto& e : a.edges) {
    out << "  edge " << a.locations.at(static_cast<std::size_t>(e.source)).name << " -> "
        << a.locations.at(static_cast<std::size_t>(e.target)).name << " on " << e.action;
    if (!e.guard.isTrue()) out << " when " << e.guard.str();
    if (e.sync.kind != SyncKind::None)
      out << " sync " << net.channels.at(static_cast<std::size_t>(e.sync.channel))
          << (e.sync.kind == SyncKind::Send ? "!" : "?");
    if (!e.updates.empty()) {
      out << " do ";
      for (std::size_t i = 0; i < e.updates.size(); ++i)
        out << (i ? ", " : "") << e.updates[i].target.str() << " := " << e.updates[i].value.str();
    }
    out << ";\n";
  }
  out << "}\n";
}

}  // namespace

std::string printNetwork(const Network& net) {
  std::ostringstream out;
  for (const auto& c : net.constants) out << "const " << c.name << " = " << c.value << ";\n";
  if (!net.channels.empty()) {
    out << "channel ";
    for (std::size_t i = 0; i < net.channels.size(); ++i) out << (i ? ", " : "") << net.channels[i];
    out << ";\n";
  }
  for (const auto& v : net.variables)
    if (v.owner < 0) {
      out << "global ";
      printVar(out, v);
    }
  for (const auto& a : net.agents) {
    out << '\n';
    printAgent(out, net, a);
  }
  return out.str();
}

std::string printStrategy(const NaturalStrategy& s) { return toString(s); }

std::string printFormula(const Formula& f) { return f.str(); }

std::string printBundle(const Bundle& b) {
  std::ostringstream out;
  out << printNetwork(b.network);
  for (const auto& s : b.strategies) out << '\n' << printStrategy(s);
  if (!b.formulas.empty()) out << '\n';
  for (const auto& [name, f] : b.formulas) out << "formula " << name << " = " << printFormula(f) << ";\n";
  return out.str();
}

}  // namespace natstrat
