#include "natstrat/formula.hpp"

#include <algorithm>
#include <sstream>

namespace natstrat {

const char* toString(TemporalOp op) {
  switch (op) {
    case TemporalOp::Next: return "X";
    case TemporalOp::Finally: return "F";
    case TemporalOp::Globally: return "G";
    case TemporalOp::Until: return "U";
  }
  return "?";
}

struct Formula::Node {
  Kind kind = Kind::True;
  SourceSpan span;
  Guard guard;
  std::vector<Formula> children;
  std::vector<int> coalition;
  std::vector<std::string> names;
  std::vector<std::string> strategies;
  int bound = 0;
  TemporalOp op = TemporalOp::Finally;
  int agent = -1;
};

namespace {

const SourceSpan& noSpan() {
  static const SourceSpan span;
  return span;
}

}  // namespace

Formula::Formula() = default;

Formula Formula::atom(Guard g) {
  switch (g.kind()) {
    case Guard::Kind::True: return Formula();
    case Guard::Kind::Not: return negate(atom(g.operand()));
    case Guard::Kind::And: return conj(atom(g.left()), atom(g.right()));
    case Guard::Kind::Or: return disj(atom(g.left()), atom(g.right()));
    default: break;
  }
  Node n;
  n.kind = Kind::Atom;
  n.guard = std::move(g);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::negate(Formula f) {
  Node n;
  n.kind = Kind::Not;
  n.children = {std::move(f)};
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::conj(Formula a, Formula b) {
  Node n;
  n.kind = Kind::And;
  n.children = {std::move(a), std::move(b)};
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::disj(Formula a, Formula b) {
  Node n;
  n.kind = Kind::Or;
  n.children = {std::move(a), std::move(b)};
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::implies(Formula a, Formula b) {
  Node n;
  n.kind = Kind::Implies;
  n.children = {std::move(a), std::move(b)};
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::strategic(std::vector<int> coalition, std::vector<std::string> coalitionNames, int bound,
                           TemporalOp op, Formula lhs, Formula rhs, std::vector<std::string> strategies) {
  if (bound < 0) throw DefinitionError("strategic bound must be non-negative");
  if (coalition.size() != coalitionNames.size()) throw DefinitionError("coalition names and indices differ");
  for (std::size_t i = 0; i < coalition.size(); ++i)
    for (std::size_t j = i + 1; j < coalition.size(); ++j)
      if (coalition[i] == coalition[j])
        throw DefinitionError("agent '" + coalitionNames[i] + "' listed twice in coalition");
  Node n;
  n.kind = Kind::Strategic;
  n.coalition = std::move(coalition);
  n.names = std::move(coalitionNames);
  n.bound = bound;
  n.op = op;
  n.children = {std::move(lhs)};
  if (op == TemporalOp::Until) n.children.push_back(std::move(rhs));
  n.strategies = std::move(strategies);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::universal(TemporalOp op, Formula lhs, Formula rhs) {
  return strategic({}, {}, 0, op, std::move(lhs), std::move(rhs));
}

Formula Formula::knows(int agent, std::string agentName, Formula f) {
  Node n;
  n.kind = Kind::Knows;
  n.agent = agent;
  n.names = {std::move(agentName)};
  n.children = {std::move(f)};
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::withSpan(SourceSpan span) const {
  Node n = node_ ? *node_ : Node{};
  n.span = std::move(span);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::withStrategies(std::vector<std::string> strategies) const {
  if (kind() != Kind::Strategic) throw DefinitionError("only strategic formulas take strategies");
  Node n = *node_;
  n.strategies = std::move(strategies);
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::withBound(int bound) const {
  if (kind() != Kind::Strategic) throw DefinitionError("only strategic formulas have a bound");
  if (bound < 0) throw DefinitionError("strategic bound must be non-negative");
  Node n = *node_;
  n.bound = bound;
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula::Kind Formula::kind() const { return node_ ? node_->kind : Kind::True; }
const SourceSpan& Formula::span() const { return node_ ? node_->span : noSpan(); }
const Guard& Formula::guard() const { return node_->guard; }
const Formula& Formula::operand() const { return node_->children.at(0); }
const Formula& Formula::left() const { return node_->children.at(0); }
const Formula& Formula::right() const { return node_->children.at(1); }
const std::vector<int>& Formula::coalition() const { return node_->coalition; }
const std::vector<std::string>& Formula::coalitionNames() const { return node_->names; }
int Formula::bound() const { return node_->bound; }
TemporalOp Formula::op() const { return node_->op; }
const std::vector<std::string>& Formula::strategies() const { return node_->strategies; }
int Formula::agent() const { return node_->agent; }
const std::string& Formula::agentName() const { return node_->names.at(0); }

int Formula::strategicDepth() const {
  if (!node_) return 0;
  int d = 0;
  for (const auto& c : node_->children) d = std::max(d, c.strategicDepth());
  return node_->kind == Kind::Strategic ? d + 1 : d;
}

bool Formula::hasKnowledge() const {
  if (!node_) return false;
  if (node_->kind == Kind::Knows) return true;
  return std::any_of(node_->children.begin(), node_->children.end(),
                     [](const Formula& c) { return c.hasKnowledge(); });
}

namespace {

// 0: implication, 1: disjunction, 2: conjunction, 3: unary/primary.
int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Implies: return 0;
    case Formula::Kind::Or: return 1;
    case Formula::Kind::And: return 2;
    default: return 3;
  }
}

void print(std::ostringstream& out, const Formula& f, int minPrec);

void printOperand(std::ostringstream& out, const Formula& f) { print(out, f, 3); }

void print(std::ostringstream& out, const Formula& f, int minPrec) {
  const int prec = precedence(f.kind());
  const bool parens = prec < minPrec;
  if (parens) out << '(';
  switch (f.kind()) {
    case Formula::Kind::True: out << "true"; break;
    case Formula::Kind::Atom: {
      const Guard& g = f.guard();
      const bool simple = g.kind() == Guard::Kind::Location || g.kind() == Guard::Kind::Variable ||
                          g.kind() == Guard::Kind::Name;
      if (simple) out << g.str();
      else out << '(' << g.str() << ')';
      break;
    }
    case Formula::Kind::Not: out << '!'; printOperand(out, f.operand()); break;
    case Formula::Kind::And:
      print(out, f.left(), 2);
      out << " && ";
      print(out, f.right(), 3);
      break;
    case Formula::Kind::Or:
      print(out, f.left(), 1);
      out << " || ";
      print(out, f.right(), 2);
      break;
    case Formula::Kind::Implies:
      print(out, f.left(), 1);
      out << " -> ";
      print(out, f.right(), 0);
      break;
    case Formula::Kind::Knows:
      out << "K[" << f.agentName() << "] ";
      printOperand(out, f.operand());
      break;
    case Formula::Kind::Strategic: {
      if (f.isUniversal() && f.strategies().empty()) {
        out << "A ";
      } else {
        out << "<<";
        for (std::size_t i = 0; i < f.coalitionNames().size(); ++i) out << (i ? "," : "") << f.coalitionNames()[i];
        out << ">>^" << f.bound();
        if (!f.strategies().empty()) {
          out << '[';
          for (std::size_t i = 0; i < f.strategies().size(); ++i) out << (i ? "," : "") << f.strategies()[i];
          out << ']';
        }
        out << ' ';
      }
      if (f.op() == TemporalOp::Until) {
        out << '(';
        print(out, f.left(), 1);
        out << " U ";
        print(out, f.right(), 1);
        out << ')';
      } else {
        out << toString(f.op()) << ' ';
        printOperand(out, f.operand());
      }
      break;
    }
  }
  if (parens) out << ')';
}

}  // namespace

std::string Formula::str() const {
  std::ostringstream out;
  print(out, *this, 0);
  return out.str();
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::True: return true;
    case Formula::Kind::Atom: return a.guard() == b.guard();
    case Formula::Kind::Knows: return a.agent() == b.agent() && a.agentName() == b.agentName() && a.operand() == b.operand();
    case Formula::Kind::Strategic:
      if (a.coalition() != b.coalition() || a.coalitionNames() != b.coalitionNames() || a.bound() != b.bound() ||
          a.op() != b.op() || a.strategies() != b.strategies())
        return false;
      break;
    default: break;
  }
  const auto& ca = a.node_->children;
  const auto& cb = b.node_->children;
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (!(ca[i] == cb[i])) return false;
  return true;
}

}  // namespace natstrat
