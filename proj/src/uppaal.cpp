#include "natstrat/uppaal.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace natstrat {

namespace {

const std::set<std::string>& reservedWords() {
  static const std::set<std::string> words = {
      "A", "E", "and", "assign", "bool", "break", "broadcast", "case", "chan", "clock", "commit", "committed",
      "const", "continue", "deadlock", "default", "do", "double", "else", "exists", "false", "for", "forall",
      "guard", "if", "imply", "inf", "init", "int", "meta", "not", "or", "priority", "process", "progress",
      "return", "scalar", "select", "state", "struct", "sup", "switch", "sync", "system", "true", "typedef",
      "urgent", "void", "while"};
  return words;
}

std::string xmlEscape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Rendered {
  int constant = -1;  // -1 expression, 0 false, 1 true
  std::string text;
  bool atomic = true;
};

Rendered literal(bool b) { return Rendered{b ? 1 : 0, b ? "true" : "false", true}; }
Rendered expr(std::string text, bool atomic) { return Rendered{-1, std::move(text), atomic}; }
std::string wrap(const Rendered& r) { return r.atomic ? r.text : "(" + r.text + ")"; }

/// Resolved names of every network entity.
struct Names {
  std::map<std::string, std::string> constants;
  std::vector<std::string> channels;
  std::vector<std::string> variables;  // by slot, bare
  std::vector<std::string> processes;
  std::vector<std::vector<std::string>> locations;

  Names(const Network& net) {
    NameMangler global;
    for (const auto& c : net.constants) constants[c.name] = global.add(c.name);
    for (const auto& ch : net.channels) channels.push_back(global.add(ch));
    variables.resize(net.variables.size());
    for (std::size_t i = 0; i < net.variables.size(); ++i)
      if (net.variables[i].owner < 0) variables[i] = global.add(net.variables[i].name);
    for (const auto& a : net.agents) processes.push_back(global.add(a.name));
    for (std::size_t a = 0; a < net.agents.size(); ++a) {
      NameMangler local = global;
      for (int slot : net.agents[a].localVars)
        variables[static_cast<std::size_t>(slot)] = local.add(net.variables[static_cast<std::size_t>(slot)].name);
      std::vector<std::string> locs;
      for (const auto& l : net.agents[a].locations) locs.push_back(local.add(l.name));
      locations.push_back(std::move(locs));
    }
  }
};

class Renderer {
 public:
  /// `owner` < 0: query context (locals qualified, locations as Process.loc).
  Renderer(const Network& net, const Names& names, int owner, int source)
      : net_(net), names_(names), owner_(owner), source_(source) {}

  std::string intExpr(const IntExpr& e) const {
    switch (e.kind()) {
      case IntExpr::Kind::Literal: return std::to_string(e.value());
      case IntExpr::Kind::Constant: {
        auto it = names_.constants.find(e.constantName());
        return it != names_.constants.end() ? it->second : std::to_string(e.value());
      }
      case IntExpr::Kind::Variable: return variable(e.var());
      case IntExpr::Kind::Negate: return "-(" + intExpr(e.operand()) + ")";
      case IntExpr::Kind::Add: return "(" + intExpr(e.lhs()) + " + " + intExpr(e.rhs()) + ")";
      case IntExpr::Kind::Sub: return "(" + intExpr(e.lhs()) + " - " + intExpr(e.rhs()) + ")";
      case IntExpr::Kind::Mul: return "(" + intExpr(e.lhs()) + " * " + intExpr(e.rhs()) + ")";
    }
    return "0";
  }

  std::string variable(const VarRef& ref) const {
    if (!ref.resolved()) throw UnsupportedExport("unresolved variable '" + ref.str() + "'");
    const auto slot = static_cast<std::size_t>(ref.slot);
    const int owner = net_.variables.at(slot).owner;
    if (owner < 0 || owner == owner_) return names_.variables[slot];
    if (owner_ >= 0) throw UnsupportedExport("edge reads another agent's local '" + ref.str() + "'");
    return names_.processes[static_cast<std::size_t>(owner)] + "." + names_.variables[slot];
  }

  Rendered guard(const Guard& g) const {
    switch (g.kind()) {
      case Guard::Kind::True: return literal(true);
      case Guard::Kind::Location: {
        const auto& locs = g.locations();
        if (owner_ >= 0) {
          if (g.agent() != owner_) throw UnsupportedExport("edge guard mentions another agent's location: " + g.str());
          return literal(std::find(locs.begin(), locs.end(), source_) != locs.end());
        }
        if (locs.empty()) return literal(false);
        std::string text;
        for (std::size_t i = 0; i < locs.size(); ++i) {
          if (i) text += " || ";
          text += names_.processes[static_cast<std::size_t>(g.agent())] + "." +
                  names_.locations[static_cast<std::size_t>(g.agent())][static_cast<std::size_t>(locs[i])];
        }
        return expr(text, locs.size() == 1);
      }
      case Guard::Kind::Variable: return expr(variable(g.var()) + " != 0", false);
      case Guard::Kind::Compare:
        return expr(intExpr(g.lhsExpr()) + " " + toString(g.op()) + " " + intExpr(g.rhsExpr()), false);
      case Guard::Kind::Not: {
        Rendered r = guard(g.operand());
        if (r.constant >= 0) return literal(r.constant == 0);
        return expr("!" + wrap(r), true);
      }
      case Guard::Kind::And:
      case Guard::Kind::Or: {
        const bool isAnd = g.kind() == Guard::Kind::And;
        Rendered a = guard(g.left());
        Rendered b = guard(g.right());
        const int absorbing = isAnd ? 0 : 1;
        if (a.constant == absorbing || b.constant == absorbing) return literal(!isAnd ? true : false);
        if (a.constant >= 0) return b;
        if (b.constant >= 0) return a;
        return expr(wrap(a) + (isAnd ? " && " : " || ") + wrap(b), false);
      }
      case Guard::Kind::Name: throw UnsupportedExport("unresolved atom '" + g.text() + "'");
    }
    return literal(false);
  }

 private:
  const Network& net_;
  const Names& names_;
  int owner_;
  int source_;
};

Rendered stateFormula(const Network& net, const Names& names, const Formula& f) {
  const Renderer r(net, names, -1, -1);
  auto binary = [&](const char* op) {
    return expr(wrap(stateFormula(net, names, f.left())) + op + wrap(stateFormula(net, names, f.right())), false);
  };
  switch (f.kind()) {
    case Formula::Kind::True: return literal(true);
    case Formula::Kind::Atom: return r.guard(f.guard());
    case Formula::Kind::Not: return expr("!" + wrap(stateFormula(net, names, f.operand())), true);
    case Formula::Kind::And: return binary(" && ");
    case Formula::Kind::Or: return binary(" || ");
    case Formula::Kind::Implies: return binary(" imply ");
    case Formula::Kind::Strategic:
      throw UnsupportedExport("nested strategic operator cannot be exported: " + f.str());
    case Formula::Kind::Knows: throw UnsupportedExport("knowledge operator cannot be exported: " + f.str());
  }
  return literal(true);
}

std::string queryWith(const Network& net, const Names& names, const Formula& f) {
  if (f.kind() != Formula::Kind::Strategic)
    throw UnsupportedExport("only a top-level strategic F or G formula can be exported: " + f.str());
  switch (f.op()) {
    case TemporalOp::Finally: return "A<> " + stateFormula(net, names, f.operand()).text;
    case TemporalOp::Globally: return "A[] " + stateFormula(net, names, f.operand()).text;
    case TemporalOp::Next:
    case TemporalOp::Until: break;
  }
  throw UnsupportedExport(std::string("temporal operator ") + toString(f.op()) + " has no UPPAAL query form");
}

/// A coalition formula describes the exported model only when that model is fixed with its strategies.
void requireMatchingStrategy(const Formula& f, const std::optional<CollectiveStrategy>& strategy) {
  if (f.kind() != Formula::Kind::Strategic || f.isUniversal()) return;
  if (!strategy) throw UnsupportedExport("coalition formula needs the model fixed with a strategy");
  for (const auto& name : f.strategies()) {
    bool found = false;
    for (const auto& m : strategy->members()) found = found || m.name == name;
    if (!found) throw UnsupportedExport("formula uses strategy '" + name + "', which is not fixed in the model");
  }
}

std::set<std::string> declaredNames(const std::string& declaration) {
  std::set<std::string> out;
  static const std::regex var(R"((?:const\s+int|int\[[^\]]*\]|int|bool)\s+([A-Za-z_]\w*))");
  for (std::sregex_iterator it(declaration.begin(), declaration.end(), var), end; it != end; ++it)
    out.insert((*it)[1]);
  static const std::regex chan(R"(chan\s+([^;]*);)");
  static const std::regex ident(R"([A-Za-z_]\w*)");
  for (std::sregex_iterator it(declaration.begin(), declaration.end(), chan), end; it != end; ++it) {
    const std::string list = (*it)[1];
    for (std::sregex_iterator jt(list.begin(), list.end(), ident); jt != end; ++jt) out.insert(jt->str());
  }
  return out;
}

/// Identifiers in an expression, with `a.b` kept together.
std::vector<std::string> identifiers(const std::string& text) {
  static const std::regex ident(R"([A-Za-z_]\w*(?:\.[A-Za-z_]\w*)?)");
  std::vector<std::string> out;
  for (std::sregex_iterator it(text.begin(), text.end(), ident), end; it != end; ++it) out.push_back(it->str());
  return out;
}

}  // namespace

// ------------------------------------------------------------------ mangling

std::string NameMangler::sanitize(const std::string& name) {
  std::string out;
  for (char c : name) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out.insert(out.begin(), '_');
  if (reservedWords().count(out)) out += '_';
  return out;
}

std::string NameMangler::add(const std::string& name) {
  const std::string base = sanitize(name);
  std::string candidate = base;
  for (int k = 2; std::find(used_.begin(), used_.end(), candidate) != used_.end(); ++k)
    candidate = base + "_" + std::to_string(k);
  used_.push_back(candidate);
  return candidate;
}

// ------------------------------------------------------------------ document

std::string UppaalDocument::system() const {
  std::string s = "system ";
  for (std::size_t i = 0; i < processes.size(); ++i) s += (i ? ", " : "") + processes[i];
  return s + ";";
}

std::string UppaalDocument::xml() const {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n"
     << "<!DOCTYPE nta PUBLIC '-//Uppaal Team//DTD Flat System 1.1//EN' "
        "'http://www.it.uu.se/research/group/darts/uppaal/flat-1_2.dtd'>\n"
     << "<nta>\n"
     << "  <declaration>" << xmlEscape(declaration) << "</declaration>\n";
  for (const auto& t : templates) {
    os << "  <template>\n"
       << "    <name>" << xmlEscape(t.name) << "</name>\n"
       << "    <declaration>" << xmlEscape(t.declaration) << "</declaration>\n";
    for (const auto& l : t.locations)
      os << "    <location id=\"" << xmlEscape(l.id) << "\">\n"
         << "      <name>" << xmlEscape(l.name) << "</name>\n"
         << "    </location>\n";
    os << "    <init ref=\"" << xmlEscape(t.init) << "\"/>\n";
    for (const auto& tr : t.transitions) {
      os << "    <transition>\n"
         << "      <source ref=\"" << xmlEscape(tr.source) << "\"/>\n"
         << "      <target ref=\"" << xmlEscape(tr.target) << "\"/>\n";
      auto label = [&os](const char* kind, const std::string& text) {
        if (!text.empty()) os << "      <label kind=\"" << kind << "\">" << xmlEscape(text) << "</label>\n";
      };
      label("guard", tr.guard);
      label("synchronisation", tr.sync);
      label("assignment", tr.assignment);
      label("comments", tr.comments);
      os << "    </transition>\n";
    }
    os << "  </template>\n";
  }
  os << "  <system>" << xmlEscape(system()) << "</system>\n";
  os << "  <queries>\n";
  for (const auto& q : queries)
    os << "    <query>\n"
       << "      <formula>" << xmlEscape(q.text) << "</formula>\n"
       << "      <comment>" << xmlEscape(q.name + ": " + q.source) << "</comment>\n"
       << "    </query>\n";
  os << "  </queries>\n</nta>\n";
  return os.str();
}

std::string UppaalDocument::queryFile() const {
  std::ostringstream os;
  for (const auto& q : queries) os << "/* " << q.name << ": " << q.source << " */\n" << q.text << "\n\n";
  return os.str();
}

std::vector<std::string> UppaalDocument::validate() const {
  std::vector<std::string> problems;
  if (processes.empty()) problems.push_back("system line instantiates no process");
  const std::set<std::string> globals = declaredNames(declaration);
  const std::set<std::string> keywords = {"true", "false", "imply", "and", "or", "not", "deadlock"};
  std::map<std::string, const UppaalTemplate*> byName;
  for (const auto& t : templates) byName[t.name] = &t;
  for (const auto& p : processes)
    if (!byName.count(p)) problems.push_back("process '" + p + "' has no template");

  for (const auto& t : templates) {
    std::set<std::string> ids;
    std::set<std::string> locNames;
    for (const auto& l : t.locations) {
      if (!ids.insert(l.id).second) problems.push_back("duplicate location id '" + l.id + "'");
      if (!locNames.insert(l.name).second) problems.push_back(t.name + ": duplicate location '" + l.name + "'");
    }
    if (t.locations.empty()) problems.push_back(t.name + ": template has no location");
    if (!ids.count(t.init)) problems.push_back(t.name + ": init refers to unknown location '" + t.init + "'");
    std::set<std::string> scope = globals;
    for (const auto& n : declaredNames(t.declaration)) scope.insert(n);
    for (const auto& tr : t.transitions) {
      if (!ids.count(tr.source)) problems.push_back(t.name + ": transition source '" + tr.source + "' unknown");
      if (!ids.count(tr.target)) problems.push_back(t.name + ": transition target '" + tr.target + "' unknown");
      for (const std::string* text : {&tr.guard, &tr.assignment, &tr.sync})
        for (const auto& id : identifiers(*text))
          if (!scope.count(id) && !keywords.count(id))
            problems.push_back(t.name + ": undeclared name '" + id + "' in '" + *text + "'");
    }
  }

  for (const auto& q : queries) {
    for (const auto& id : identifiers(q.text)) {
      if (keywords.count(id) || globals.count(id) || id == "A" || id == "E") continue;
      const auto dot = id.find('.');
      bool ok = false;
      if (dot != std::string::npos) {
        auto it = byName.find(id.substr(0, dot));
        if (it != byName.end()) {
          const std::string member = id.substr(dot + 1);
          for (const auto& l : it->second->locations) ok = ok || l.name == member;
          ok = ok || declaredNames(it->second->declaration).count(member) > 0;
        }
      }
      if (!ok) problems.push_back("query '" + q.name + "' uses undeclared name '" + id + "'");
    }
  }
  return problems;
}

// ------------------------------------------------------------------ export

std::string uppaalQuery(const Network& net, const Formula& f) {
  const Names names(net);
  return queryWith(net, names, f);
}

UppaalDocument exportUppaal(const Network& original, const std::optional<CollectiveStrategy>& strategy,
                            const std::vector<std::pair<std::string, Formula>>& formulas) {
  const Network net = strategy ? fixStrategy(original, *strategy) : original;
  const Names names(net);
  UppaalDocument doc;

  std::ostringstream decl;
  for (const auto& c : net.constants) decl << "const int " << names.constants.at(c.name) << " = " << c.value << ";\n";
  if (!names.channels.empty()) {
    decl << "chan ";
    for (std::size_t i = 0; i < names.channels.size(); ++i) decl << (i ? ", " : "") << names.channels[i];
    decl << ";\n";
  }
  auto varDecl = [&](std::ostream& os, std::size_t slot) {
    const Variable& v = net.variables[slot];
    os << "int[" << v.lower << "," << v.upper << "] " << names.variables[slot] << " = " << v.initial << ";\n";
  };
  for (std::size_t i = 0; i < net.variables.size(); ++i)
    if (net.variables[i].owner < 0) varDecl(decl, i);
  doc.declaration = decl.str();

  int nextId = 0;
  for (std::size_t a = 0; a < net.agents.size(); ++a) {
    const AgentTemplate& agent = net.agents[a];
    UppaalTemplate t;
    t.name = names.processes[a];
    std::ostringstream local;
    for (int slot : agent.localVars) varDecl(local, static_cast<std::size_t>(slot));
    t.declaration = local.str();
    std::vector<std::string> ids;
    for (std::size_t l = 0; l < agent.locations.size(); ++l) {
      ids.push_back("id" + std::to_string(nextId++));
      t.locations.push_back({ids.back(), names.locations[a][l]});
    }
    t.init = ids.empty() ? std::string() : ids[static_cast<std::size_t>(agent.initial)];

    const NaturalStrategy* member = strategy ? strategy->forAgent(static_cast<int>(a)) : nullptr;
    for (const Edge& e : agent.edges) {
      UppaalTransition tr;
      tr.source = ids[static_cast<std::size_t>(e.source)];
      tr.target = ids[static_cast<std::size_t>(e.target)];
      const Renderer r(net, names, static_cast<int>(a), e.source);
      const Rendered g = r.guard(e.guard);
      if (g.constant != 1) tr.guard = g.text;
      if (e.sync.kind != SyncKind::None)
        tr.sync = names.channels[static_cast<std::size_t>(e.sync.channel)] + (e.sync.kind == SyncKind::Send ? "!" : "?");
      for (std::size_t u = 0; u < e.updates.size(); ++u) {
        if (u) tr.assignment += ", ";
        tr.assignment += r.variable(e.updates[u].target) + " = " + r.intExpr(e.updates[u].value);
      }
      tr.comments = "action " + e.action;
      if (member) tr.comments += "\nprecondition (" + member->name + "): " + permissionGuard(*member, e.action).str();
      t.transitions.push_back(std::move(tr));
    }
    doc.templates.push_back(std::move(t));
    doc.processes.push_back(names.processes[a]);
  }

  for (const auto& [name, f] : formulas) {
    try {
      requireMatchingStrategy(f, strategy);
      doc.queries.push_back({name, f.str(), queryWith(net, names, f)});
    } catch (const UnsupportedExport& ex) {
      doc.skipped.emplace_back(name, ex.message());
    }
  }
  return doc;
}

std::pair<std::string, std::string> writeUppaal(const UppaalDocument& doc, const std::string& dir,
                                                const std::string& base) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const std::string xmlPath = (fs::path(dir) / (base + ".xml")).string();
  const std::string queryPath = (fs::path(dir) / (base + ".q")).string();
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
  };
  write(xmlPath, doc.xml());
  write(queryPath, doc.queryFile());
  return {xmlPath, queryPath};
}

}  // namespace natstrat
