#pragma once

#include <memory>
#include <string>
#include <vector>

#include "natstrat/errors.hpp"
#include "natstrat/state.hpp"

namespace natstrat {

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

const char* toString(CmpOp op);
bool compare(CmpOp op, int lhs, int rhs);

/// Reference to a network variable. `qualifier` is the agent name when the
/// source wrote `Agent.var`; `slot` indexes GlobalState::values once resolved.
struct VarRef {
  int slot = -1;
  std::string qualifier;
  std::string name;

  bool resolved() const { return slot >= 0; }
  std::string str() const { return qualifier.empty() ? name : qualifier + "." + name; }
  friend bool operator==(const VarRef& a, const VarRef& b) {
    return a.slot == b.slot && a.qualifier == b.qualifier && a.name == b.name;
  }
};

/// Integer expression over literals, named constants and variables (+, -, *).
class IntExpr {
 public:
  enum class Kind { Literal, Constant, Variable, Negate, Add, Sub, Mul };

  IntExpr();  // literal 0
  static IntExpr literal(int value);
  static IntExpr constant(std::string name, int value);
  static IntExpr variable(VarRef ref);
  static IntExpr negate(IntExpr operand);
  static IntExpr binary(Kind kind, IntExpr lhs, IntExpr rhs);

  Kind kind() const;
  int value() const;  // Literal and Constant
  const std::string& constantName() const;
  const VarRef& var() const;
  const IntExpr& lhs() const;
  const IntExpr& rhs() const;
  const IntExpr& operand() const { return lhs(); }

  int eval(const std::vector<int>& values) const;
  int symbolCount() const;
  std::string str() const;
  void collectVars(std::vector<VarRef>& out) const;

  friend bool operator==(const IntExpr& a, const IntExpr& b);

 private:
  struct Node;
  explicit IntExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Boolean condition over location atoms, variables and comparisons.
///
/// Immutable and cheap to copy. `Name` nodes are atoms that have not been
/// resolved against a network (free-standing strategies); evaluating one is
/// an error.
class Guard {
 public:
  enum class Kind { True, Location, Variable, Compare, Not, And, Or, Name };

  Guard();  // ⊤
  static Guard top() { return Guard(); }
  static Guard location(int agent, std::vector<int> locations, std::string text);
  static Guard variable(VarRef ref);
  static Guard compare(CmpOp op, IntExpr lhs, IntExpr rhs);
  static Guard name(std::string text);
  static Guard negate(Guard operand);
  static Guard conj(Guard lhs, Guard rhs);
  static Guard disj(Guard lhs, Guard rhs);

  Guard withSpan(SourceSpan span) const;

  Kind kind() const;
  bool isTrue() const { return kind() == Kind::True; }
  const SourceSpan& span() const;
  int agent() const;
  const std::vector<int>& locations() const;
  const std::string& text() const;
  const VarRef& var() const;
  CmpOp op() const;
  const IntExpr& lhsExpr() const;
  const IntExpr& rhsExpr() const;
  const Guard& operand() const;
  const Guard& left() const;
  const Guard& right() const;

  bool eval(const GlobalState& state) const;
  std::string str() const;

  friend bool operator==(const Guard& a, const Guard& b);

 private:
  struct Node;
  explicit Guard(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Conjunction/disjunction of a list; empty lists give ⊤ and ¬⊤ respectively.
Guard conjunction(const std::vector<Guard>& parts);
Guard disjunction(const std::vector<Guard>& parts);

}  // namespace natstrat
