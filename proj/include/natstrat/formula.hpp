#pragma once

#include <memory>
#include <string>
#include <vector>

#include "natstrat/errors.hpp"
#include "natstrat/guard.hpp"

namespace natstrat {

enum class TemporalOp { Next, Finally, Globally, Until };
const char* toString(TemporalOp op);

/// NatATL formula with knowledge. `A γ` is stored as a strategic node with an
/// empty coalition and bound 0.
class Formula {
 public:
  enum class Kind { True, Atom, Not, And, Or, Implies, Strategic, Knows };

  Formula();  // ⊤
  static Formula top() { return Formula(); }
  /// Boolean structure of `g` becomes formula connectives.
  static Formula atom(Guard g);
  static Formula negate(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  /// `rhs` is used only for Until (`lhs U rhs`).
  static Formula strategic(std::vector<int> coalition, std::vector<std::string> coalitionNames, int bound,
                           TemporalOp op, Formula lhs, Formula rhs = Formula(),
                           std::vector<std::string> strategies = {});
  static Formula universal(TemporalOp op, Formula lhs, Formula rhs = Formula());
  static Formula knows(int agent, std::string agentName, Formula f);

  Formula withSpan(SourceSpan span) const;
  /// Copy of a strategic node with different strategy references.
  Formula withStrategies(std::vector<std::string> strategies) const;
  Formula withBound(int bound) const;

  Kind kind() const;
  const SourceSpan& span() const;
  const Guard& guard() const;
  const Formula& operand() const;  // Not, Knows, Strategic (X/F/G and Until lhs)
  const Formula& left() const;
  const Formula& right() const;  // binary connectives, Until rhs
  const std::vector<int>& coalition() const;
  const std::vector<std::string>& coalitionNames() const;
  int bound() const;
  TemporalOp op() const;
  const std::vector<std::string>& strategies() const;
  bool isUniversal() const { return kind() == Kind::Strategic && coalition().empty(); }
  int agent() const;  // Knows
  const std::string& agentName() const;

  /// Maximum nesting of strategic operators.
  int strategicDepth() const;
  bool hasKnowledge() const;
  /// Identity of the underlying node; stable for the lifetime of any copy.
  const void* id() const { return node_.get(); }

  std::string str() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace natstrat
