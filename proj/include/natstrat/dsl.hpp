#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "natstrat/checker.hpp"
#include "natstrat/formula.hpp"
#include "natstrat/model.hpp"
#include "natstrat/strategy.hpp"

namespace natstrat {

/// Returns the text of an included file; `path` is already resolved against the includer.
using SourceLoader = std::function<std::string(const std::string& path)>;

struct LoadOptions {
  std::string fileName = "<input>";
  /// Overrides for `const` declarations, by name.
  std::map<std::string, int> constants;
  /// Defaults to reading from the filesystem.
  SourceLoader loader;
};

/// A network with the strategies and formulas declared next to it.
struct Bundle {
  Network network;
  std::vector<NaturalStrategy> strategies;
  std::vector<std::pair<std::string, Formula>> formulas;

  const NaturalStrategy* strategy(const std::string& name) const;
  const Formula* formula(const std::string& name) const;
  const NaturalStrategy& requireStrategy(const std::string& name) const;
  const Formula& requireFormula(const std::string& name) const;
  StrategyTable strategyTable() const;
};

Bundle parseBundle(std::string_view text, const LoadOptions& options = {});
Bundle loadBundle(const std::string& path, LoadOptions options = {});
Network parseNetwork(std::string_view text, const LoadOptions& options = {});

/// Either a full `strategy ... { ... }` block or a bare rule list for `agent`.
NaturalStrategy parseStrategy(std::string_view text, const Network& net, const std::string& agent = {},
                              const std::string& fileName = "<strategy>");
/// Strategy without a network: atoms stay unresolved (`Guard::Kind::Name`). Enough for complexity.
NaturalStrategy parseFreeStrategy(std::string_view text, const std::string& fileName = "<strategy>");
Formula parseFormula(std::string_view text, const Network& net, const std::string& fileName = "<formula>");
/// Guard in the scope of `agent` (-1: any agent's atoms, as in formulas).
Guard parseGuard(std::string_view text, const Network& net, int agent, const std::string& fileName = "<guard>");

std::string printNetwork(const Network& net);
std::string printStrategy(const NaturalStrategy& s);
std::string printFormula(const Formula& f);
std::string printBundle(const Bundle& b);

}  // namespace natstrat
