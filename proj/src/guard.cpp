#include "natstrat/guard.hpp"

#include <stdexcept>

namespace natstrat {

const char* toString(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

bool compare(CmpOp op, int lhs, int rhs) {
  switch (op) {
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Ne: return lhs != rhs;
    case CmpOp::Lt: return lhs < rhs;
    case CmpOp::Le: return lhs <= rhs;
    case CmpOp::Gt: return lhs > rhs;
    case CmpOp::Ge: return lhs >= rhs;
  }
  return false;
}

// ---------------------------------------------------------------------------
// IntExpr

struct IntExpr::Node {
  Kind kind = Kind::Literal;
  int value = 0;
  std::string name;
  VarRef var;
  IntExpr lhs;
  IntExpr rhs;
};

IntExpr::IntExpr() : node_(nullptr) {}

IntExpr IntExpr::literal(int value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Literal;
  n->value = value;
  return IntExpr(std::move(n));
}

IntExpr IntExpr::constant(std::string name, int value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = value;
  n->name = std::move(name);
  return IntExpr(std::move(n));
}

IntExpr IntExpr::variable(VarRef ref) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->var = std::move(ref);
  return IntExpr(std::move(n));
}

IntExpr IntExpr::negate(IntExpr operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Negate;
  n->lhs = std::move(operand);
  return IntExpr(std::move(n));
}

IntExpr IntExpr::binary(Kind kind, IntExpr lhs, IntExpr rhs) {
  if (kind != Kind::Add && kind != Kind::Sub && kind != Kind::Mul)
    throw std::invalid_argument("IntExpr::binary: not a binary operator");
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return IntExpr(std::move(n));
}

IntExpr::Kind IntExpr::kind() const { return node_ ? node_->kind : Kind::Literal; }
int IntExpr::value() const { return node_ ? node_->value : 0; }

const std::string& IntExpr::constantName() const {
  static const std::string empty;
  return node_ ? node_->name : empty;
}

const VarRef& IntExpr::var() const {
  static const VarRef none;
  return node_ ? node_->var : none;
}

const IntExpr& IntExpr::lhs() const {
  static const IntExpr zero;
  return node_ ? node_->lhs : zero;
}

const IntExpr& IntExpr::rhs() const {
  static const IntExpr zero;
  return node_ ? node_->rhs : zero;
}

int IntExpr::eval(const std::vector<int>& values) const {
  switch (kind()) {
    case Kind::Literal:
    case Kind::Constant: return value();
    case Kind::Variable: {
      const VarRef& v = var();
      if (!v.resolved()) throw std::logic_error("unresolved variable '" + v.str() + "'");
      return values.at(static_cast<std::size_t>(v.slot));
    }
    case Kind::Negate: return -lhs().eval(values);
    case Kind::Add: return lhs().eval(values) + rhs().eval(values);
    case Kind::Sub: return lhs().eval(values) - rhs().eval(values);
    case Kind::Mul: return lhs().eval(values) * rhs().eval(values);
  }
  return 0;
}

int IntExpr::symbolCount() const {
  switch (kind()) {
    case Kind::Literal:
    case Kind::Constant:
    case Kind::Variable: return 1;
    case Kind::Negate: return 1 + lhs().symbolCount();
    default: return 1 + lhs().symbolCount() + rhs().symbolCount();
  }
}

namespace {
int precedence(IntExpr::Kind k) {
  switch (k) {
    case IntExpr::Kind::Add:
    case IntExpr::Kind::Sub: return 1;
    case IntExpr::Kind::Mul: return 2;
    case IntExpr::Kind::Negate: return 3;
    default: return 4;
  }
}

std::string render(const IntExpr& e);

std::string renderChild(const IntExpr& child, int parentPrec, bool rightSide) {
  int p = precedence(child.kind());
  bool paren = p < parentPrec || (rightSide && p == parentPrec && p < 3);
  std::string s = render(child);
  return paren ? "(" + s + ")" : s;
}

std::string render(const IntExpr& e) {
  switch (e.kind()) {
    case IntExpr::Kind::Literal: return std::to_string(e.value());
    case IntExpr::Kind::Constant: return e.constantName();
    case IntExpr::Kind::Variable: return e.var().str();
    case IntExpr::Kind::Negate: return "-" + renderChild(e.operand(), 3, false);
    case IntExpr::Kind::Add:
      return renderChild(e.lhs(), 1, false) + " + " + renderChild(e.rhs(), 1, true);
    case IntExpr::Kind::Sub:
      return renderChild(e.lhs(), 1, false) + " - " + renderChild(e.rhs(), 1, true);
    case IntExpr::Kind::Mul:
      return renderChild(e.lhs(), 2, false) + " * " + renderChild(e.rhs(), 2, true);
  }
  return "?";
}
}  // namespace

std::string IntExpr::str() const { return render(*this); }

void IntExpr::collectVars(std::vector<VarRef>& out) const {
  switch (kind()) {
    case Kind::Variable: out.push_back(var()); break;
    case Kind::Negate: lhs().collectVars(out); break;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
      lhs().collectVars(out);
      rhs().collectVars(out);
      break;
    default: break;
  }
}

bool operator==(const IntExpr& a, const IntExpr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case IntExpr::Kind::Literal: return a.value() == b.value();
    case IntExpr::Kind::Constant: return a.value() == b.value() && a.constantName() == b.constantName();
    case IntExpr::Kind::Variable: return a.var() == b.var();
    case IntExpr::Kind::Negate: return a.lhs() == b.lhs();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

// ---------------------------------------------------------------------------
// Guard

struct Guard::Node {
  Kind kind = Kind::True;
  SourceSpan span;
  int agent = -1;
  std::vector<int> locations;
  std::string text;
  VarRef var;
  CmpOp op = CmpOp::Eq;
  IntExpr lhsExpr;
  IntExpr rhsExpr;
  Guard a;
  Guard b;
};

Guard::Guard() : node_(nullptr) {}

Guard Guard::location(int agent, std::vector<int> locations, std::string text) {
  Node n;
  n.kind = Kind::Location;
  n.agent = agent;
  n.locations = std::move(locations);
  n.text = std::move(text);
  return Guard(std::make_shared<const Node>(std::move(n)));
}

Guard Guard::variable(VarRef ref) {
  Node n;
  n.kind = Kind::Variable;
  n.var = std::move(ref);
  return Guard(std::make_shared<const Node>(std::move(n)));
}

Guard Guard::compare(CmpOp op, IntExpr lhs, IntExpr rhs) {
  Node n;
  n.kind = Kind::Compare;
  n.op = op;
  n.lhsExpr = std::move(lhs);
  n.rhsExpr = std::move(rhs);
  return Guard(std::make_shared<const Node>(std::move(n)));
}

Guard Guard::name(std::string text) {
  Node n;
  n.kind = Kind::Name;
  n.text = std::move(text);
  return Guard(std::make_shared<const Node>(std::move(n)));
}

Guard Guard::negate(Guard operand) {
  Node n;
  n.kind = Kind::Not;
  n.a = std::move(operand);
  return Guard(std::make_shared<const Node>(std::move(n)));
}

Guard Guard::conj(Guard lhs, Guard rhs) {
  Node n;
  n.kind = Kind::And;
  n.a = std::move(lhs);
  n.b = std::move(rhs);
  return Guard(std::make_shared<const Node>(std::move(n)));
}

Guard Guard::disj(Guard lhs, Guard rhs) {
  Node n;
  n.kind = Kind::Or;
  n.a = std::move(lhs);
  n.b = std::move(rhs);
  return Guard(std::make_shared<const Node>(std::move(n)));
}

Guard Guard::withSpan(SourceSpan span) const {
  Node n = node_ ? *node_ : Node{};
  n.span = std::move(span);
  return Guard(std::make_shared<const Node>(std::move(n)));
}

Guard::Kind Guard::kind() const { return node_ ? node_->kind : Kind::True; }

const SourceSpan& Guard::span() const {
  static const SourceSpan none;
  return node_ ? node_->span : none;
}

int Guard::agent() const { return node_ ? node_->agent : -1; }

const std::vector<int>& Guard::locations() const {
  static const std::vector<int> none;
  return node_ ? node_->locations : none;
}

const std::string& Guard::text() const {
  static const std::string none;
  return node_ ? node_->text : none;
}

const VarRef& Guard::var() const {
  static const VarRef none;
  return node_ ? node_->var : none;
}

CmpOp Guard::op() const { return node_ ? node_->op : CmpOp::Eq; }

const IntExpr& Guard::lhsExpr() const {
  static const IntExpr zero;
  return node_ ? node_->lhsExpr : zero;
}

const IntExpr& Guard::rhsExpr() const {
  static const IntExpr zero;
  return node_ ? node_->rhsExpr : zero;
}

const Guard& Guard::operand() const { return left(); }

const Guard& Guard::left() const {
  static const Guard truth;
  return node_ ? node_->a : truth;
}

const Guard& Guard::right() const {
  static const Guard truth;
  return node_ ? node_->b : truth;
}

bool Guard::eval(const GlobalState& state) const {
  switch (kind()) {
    case Kind::True: return true;
    case Kind::Location: {
      int here = state.locations.at(static_cast<std::size_t>(agent()));
      for (int l : locations())
        if (l == here) return true;
      return false;
    }
    case Kind::Variable: {
      const VarRef& v = var();
      if (!v.resolved()) throw std::logic_error("unresolved variable '" + v.str() + "'");
      return state.values.at(static_cast<std::size_t>(v.slot)) != 0;
    }
    case Kind::Compare:
      return natstrat::compare(op(), lhsExpr().eval(state.values), rhsExpr().eval(state.values));
    case Kind::Not: return !operand().eval(state);
    case Kind::And: return left().eval(state) && right().eval(state);
    case Kind::Or: return left().eval(state) || right().eval(state);
    case Kind::Name: throw std::logic_error("unresolved atom '" + text() + "'");
  }
  return false;
}

namespace {
int precedence(Guard::Kind k) {
  switch (k) {
    case Guard::Kind::Or: return 1;
    case Guard::Kind::And: return 2;
    case Guard::Kind::Not: return 3;
    default: return 4;
  }
}

std::string renderGuard(const Guard& g);

std::string renderGuardChild(const Guard& child, int parentPrec, bool rightSide) {
  int p = precedence(child.kind());
  bool paren = p < parentPrec || (rightSide && p == parentPrec && p < 3);
  std::string s = renderGuard(child);
  return paren ? "(" + s + ")" : s;
}

std::string renderGuard(const Guard& g) {
  switch (g.kind()) {
    case Guard::Kind::True: return "true";
    case Guard::Kind::Location:
    case Guard::Kind::Name: return g.text();
    case Guard::Kind::Variable: return g.var().str();
    case Guard::Kind::Compare:
      return g.lhsExpr().str() + " " + toString(g.op()) + " " + g.rhsExpr().str();
    case Guard::Kind::Not: {
      // a comparison under negation needs parentheses to reparse as Not(Compare)
      const Guard& c = g.operand();
      bool paren = precedence(c.kind()) < 3 || c.kind() == Guard::Kind::Compare;
      return "!" + (paren ? "(" + renderGuard(c) + ")" : renderGuard(c));
    }
    case Guard::Kind::And:
      return renderGuardChild(g.left(), 2, false) + " && " + renderGuardChild(g.right(), 2, true);
    case Guard::Kind::Or:
      return renderGuardChild(g.left(), 1, false) + " || " + renderGuardChild(g.right(), 1, true);
  }
  return "?";
}
}  // namespace

std::string Guard::str() const { return renderGuard(*this); }

bool operator==(const Guard& a, const Guard& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Guard::Kind::True: return true;
    case Guard::Kind::Location:
      return a.agent() == b.agent() && a.locations() == b.locations() && a.text() == b.text();
    case Guard::Kind::Name: return a.text() == b.text();
    case Guard::Kind::Variable: return a.var() == b.var();
    case Guard::Kind::Compare:
      return a.op() == b.op() && a.lhsExpr() == b.lhsExpr() && a.rhsExpr() == b.rhsExpr();
    case Guard::Kind::Not: return a.operand() == b.operand();
    case Guard::Kind::And:
    case Guard::Kind::Or: return a.left() == b.left() && a.right() == b.right();
  }
  return false;
}

Guard conjunction(const std::vector<Guard>& parts) {
  if (parts.empty()) return Guard::top();
  Guard g = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) g = Guard::conj(g, parts[i]);
  return g;
}

Guard disjunction(const std::vector<Guard>& parts) {
  if (parts.empty()) return Guard::negate(Guard::top());
  Guard g = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) g = Guard::disj(g, parts[i]);
  return g;
}

}  // namespace natstrat
