#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "natstrat/formula.hpp"
#include "natstrat/model.hpp"
#include "natstrat/strategy.hpp"

namespace natstrat {

/// Formula or model feature with no UPPAAL counterpart.
class UnsupportedExport : public DefinitionError {
 public:
  using DefinitionError::DefinitionError;
};

struct UppaalLocation {
  std::string id;
  std::string name;
};

struct UppaalTransition {
  std::string source;
  std::string target;
  std::string guard;
  std::string sync;
  std::string assignment;
  std::string comments;
};

struct UppaalTemplate {
  std::string name;
  std::string declaration;
  std::vector<UppaalLocation> locations;
  std::string init;
  std::vector<UppaalTransition> transitions;
};

struct UppaalQuery {
  std::string name;
  std::string source;  // formula as written in the bundle
  std::string text;
};

struct UppaalDocument {
  std::string declaration;
  std::vector<UppaalTemplate> templates;
  std::vector<std::string> processes;
  std::vector<UppaalQuery> queries;
  /// Formulas left out, with the reason.
  std::vector<std::pair<std::string, std::string>> skipped;

  std::string system() const;
  std::string xml() const;
  std::string queryFile() const;
  /// Structural problems; empty means the document is complete and every name it uses is declared.
  std::vector<std::string> validate() const;
};

/// Deterministic identifier mangling: characters outside [A-Za-z0-9_] become `_`, a
/// leading digit or reserved word gets a `_` prefix or suffix, and clashes in the same
/// scope get `_2`, `_3`, ... in first-come order.
class NameMangler {
 public:
  std::string add(const std::string& name);
  static std::string sanitize(const std::string& name);

 private:
  std::vector<std::string> used_;
};

/// `A<> φ` / `A[] φ` for a strategic F / G node over state formulas.
std::string uppaalQuery(const Network& net, const Formula& f);

/// Maps agents to templates one-to-one. With a strategy, exports fixStrategy(net, strategy)
/// and records each coalition edge's precondition in its comments label.
UppaalDocument exportUppaal(const Network& net, const std::optional<CollectiveStrategy>& strategy = std::nullopt,
                            const std::vector<std::pair<std::string, Formula>>& formulas = {});

/// Writes `<dir>/<base>.xml` and `<dir>/<base>.q`; returns both paths.
std::pair<std::string, std::string> writeUppaal(const UppaalDocument& doc, const std::string& dir,
                                                const std::string& base);

}  // namespace natstrat
