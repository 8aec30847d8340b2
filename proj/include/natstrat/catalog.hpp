#pragma once

#include <map>
#include <string>
#include <vector>

#include "natstrat/dsl.hpp"
#include "natstrat/explore.hpp"

namespace natstrat::catalog {

enum class VoterLevel { Base, Check4, Full };
const char* toString(VoterLevel level);

enum class CoercerVariant { Punisher, Infector, InfectAndPunish };
const char* toString(CoercerVariant variant);
/// Accepts `punisher`, `infector`, `infectAndPunish`. Throws DefinitionError.
CoercerVariant parseCoercerVariant(const std::string& name);

/// Names of the embedded model files, sorted.
std::vector<std::string> files();
/// Text of an embedded file. Throws DefinitionError for unknown names.
const std::string& source(const std::string& file);
/// Resolves `include` paths against the embedded files.
SourceLoader loader();
/// Loads an embedded bundle, with constant overrides.
Bundle load(const std::string& file, const std::map<std::string, int>& constants = {});

/// `n` and `m` are only used by the full level and must be positive.
Bundle buildVoter(VoterLevel level, int n = 7, int m = 5);
Bundle buildInfrastructure();
Bundle buildCoercer(CoercerVariant variant, bool obedient = false);
Bundle buildLeakyToy();
Bundle buildBlindToy();

/// Copy of the initial state with `agent` moved to `location`.
GlobalState stateAt(const Network& net, const std::string& agent, const std::string& location);

struct ExpectedMetric {
  std::string id;
  std::string kind;  // complexity, guard-length, verdict, steps
  std::string description;
  std::string expected;
};

const std::vector<ExpectedMetric>& expectedMetrics();

struct MetricResult {
  ExpectedMetric metric;
  std::string actual;
  std::string detail;
  double seconds = 0.0;
  bool pass() const { return actual == metric.expected; }
};

/// Recomputes every expected metric from the catalog.
std::vector<MetricResult> runCaseStudy(const ExploreOptions& explore = {});

}  // namespace natstrat::catalog
