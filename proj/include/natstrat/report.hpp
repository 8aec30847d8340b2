#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace natstrat {

inline constexpr const char* kReportSchema = "natstrat-report/1";

struct TaskResult {
  std::string kind;    // complexity, check, steps, synth, export, metric
  std::string name;
  std::string status;  // true, false, unknown, ok, error, resource-limit
  std::string reason;
  std::map<std::string, std::string> values;
  /// Witness strategy, one line per rule.
  std::vector<std::string> witness;
  /// Counterexample or goal path, one described state per entry.
  std::vector<std::string> trace;
  int traceLoopStart = -1;

  friend bool operator==(const TaskResult&, const TaskResult&) = default;
};

struct ReportStats {
  std::size_t statesExplored = 0;
  std::size_t strategiesEnumerated = 0;
  double seconds = 0.0;

  friend bool operator==(const ReportStats&, const ReportStats&) = default;
};

struct RunReport {
  std::vector<std::string> command;
  std::vector<TaskResult> tasks;
  ReportStats stats;
  int exitStatus = 0;

  std::string toJson(int indent = 2) const;
  /// Throws DefinitionError on malformed or schema-mismatched input.
  static RunReport fromJson(const std::string& text);
  std::string toText() const;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

}  // namespace natstrat
