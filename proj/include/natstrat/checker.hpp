#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "natstrat/formula.hpp"
#include "natstrat/outcome.hpp"

namespace natstrat {

enum class Verdict { False, True, Unknown };
const char* toString(Verdict v);
Verdict fromBool(bool b);

// ---------------------------------------------------------------------------
// Universal temporal operators on an explicit graph. Terminal states stutter.

std::vector<char> allNext(const StateGraph& g, const std::vector<char>& a);
std::vector<char> allFinally(const StateGraph& g, const std::vector<char>& goal);
std::vector<char> allGlobally(const StateGraph& g, const std::vector<char>& inv);
std::vector<char> allUntil(const StateGraph& g, const std::vector<char>& a, const std::vector<char>& b);

struct TemporalResult {
  bool holds = false;
  /// Counterexample when the property fails (empty when it holds).
  Path witness;
};

/// `b` is only read for Until.
TemporalResult checkTemporalUniversal(const StateGraph& g, TemporalOp op, const std::vector<char>& a,
                                      const std::vector<char>& b = {}, int root = 0);

// ---------------------------------------------------------------------------
// Knowledge

/// Classes of states that `agent` cannot tell apart: same own location, own
/// locals and globals.
class ObservationPartition {
 public:
  ObservationPartition(const Network& net, const StateGraph& g, int agent);
  int classOf(int state) const { return classOf_.at(static_cast<std::size_t>(state)); }
  std::size_t classCount() const { return members_.size(); }
  const std::vector<int>& members(int cls) const { return members_.at(static_cast<std::size_t>(cls)); }
  bool indistinguishable(int a, int b) const { return classOf(a) == classOf(b); }

 private:
  std::vector<int> classOf_;
  std::vector<std::vector<int>> members_;
};

std::vector<int> observation(const Network& net, const GlobalState& q, int agent);

bool evalKnows(const Network& net, const StateGraph& g, int agent, const std::vector<char>& stateSet, int q);
/// K_agent over every state of `g`.
std::vector<char> knowsSet(const ObservationPartition& p, const std::vector<char>& stateSet);

// ---------------------------------------------------------------------------
// Strategic checking

struct CheckStats {
  std::size_t statesExplored = 0;
  std::size_t strategiesEnumerated = 0;
  /// Candidates with no executable rule in some outcome state.
  std::size_t illFormedSkipped = 0;
  double seconds = 0.0;
};

struct CheckResult {
  Verdict verdict = Verdict::Unknown;
  std::string reason;
  /// Strategy that verified (verify mode: the supplied one; synthesis: the witness).
  std::optional<CollectiveStrategy> strategy;
  /// Counterexample (false) or goal-reaching path; expressed as network states.
  std::vector<GlobalState> trace;
  int traceLoopStart = -1;
  CheckStats stats;

  bool holds() const { return verdict == Verdict::True; }
};

enum class CheckMode { Verify, Synthesize };
const char* toString(CheckMode m);

struct SynthesisOptions {
  std::size_t candidateCap = 200'000;
  /// Extra atoms offered to guards in addition to the default vocabulary.
  std::vector<Guard> extraAtoms;
  /// Replace the default vocabulary entirely when non-empty.
  std::vector<Guard> vocabulary;
};

using StrategyTable = std::map<std::string, NaturalStrategy>;

struct CheckOptions {
  CheckMode mode = CheckMode::Verify;
  /// Used by strategic nodes without their own strategy references.
  std::optional<CollectiveStrategy> supplied;
  /// Resolves the names carried by strategic nodes.
  StrategyTable strategies;
  ExploreOptions explore;
  SynthesisOptions synthesis;
};

/// ⟨⟨A⟩⟩^{≤k} γ with a given strategy: bound gate, then universal check on outcomes.
/// `temporal` must be a strategic node; its operands are evaluated under `options`.
CheckResult verifyStrategic(const Network& net, const GlobalState& q, const Formula& temporal,
                            const CollectiveStrategy& strategy, const CheckOptions& options = {});

/// Existential version by bounded enumeration of collective natural strategies.
CheckResult synthesizeStrategic(const Network& net, const GlobalState& q, const Formula& temporal,
                                const CheckOptions& options = {});

/// Evaluates `f` at `q`, labelling nested strategic and epistemic subformulas bottom-up.
CheckResult evalFormula(const Network& net, const GlobalState& q, const Formula& f, const CheckOptions& options = {});

/// Collective strategy referenced by a strategic node, or the supplied default.
CollectiveStrategy resolveStrategy(const Network& net, const Formula& strategic, const CheckOptions& options);

}  // namespace natstrat
