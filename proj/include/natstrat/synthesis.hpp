#pragma once

#include <functional>
#include <vector>

#include "natstrat/checker.hpp"

namespace natstrat {

/// Own-location atoms plus every atomic variable test or comparison used in
/// edge guards that the agent can observe.
std::vector<Guard> defaultVocabulary(const Network& net, int agent);

/// Guards over a vocabulary up to a length, one per distinct truth vector on a
/// fixed state set (shortest first, then by text). Never-true guards are dropped.
class GuardPool {
 public:
  GuardPool(const std::vector<Guard>& atoms, const std::vector<GlobalState>& states, int maxLength);
  /// Guards of exactly this length (paper convention).
  const std::vector<Guard>& ofLength(int length) const;
  const std::vector<char>& truth(int length, std::size_t index) const;
  std::size_t size() const;

 private:
  struct Entry {
    Guard guard;
    std::vector<char> truth;
  };
  std::vector<std::vector<Entry>> byLength_;
  std::vector<std::vector<Guard>> guards_;
};

/// Callback returns true to stop the enumeration.
using CandidateVisitor = std::function<bool(const CollectiveStrategy&)>;

/// Enumerates complete collective strategies for `coalition` with complexity at
/// most `bound`, ordered by (complexity, rule count, guard text, action).
/// Dead rules (never first to fire on `states`) are skipped. Throws
/// ResourceLimit once more than `options.candidateCap` candidates are produced.
/// Returns the number of candidates visited.
std::size_t enumerateStrategies(const Network& net, const std::vector<GlobalState>& states,
                                const std::vector<int>& coalition, int bound, const SynthesisOptions& options,
                                const CandidateVisitor& visit);

}  // namespace natstrat
