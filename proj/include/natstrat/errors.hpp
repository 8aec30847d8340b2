#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace natstrat {

/// Position of a parsed entity. Lines and columns are 1-based; 0 means unknown.
struct SourceSpan {
  std::string file;
  int line = 0;
  int column = 0;
  int endLine = 0;
  int endColumn = 0;

  bool known() const { return line > 0; }
  std::string str() const;
};

/// Static problem with a model, strategy or formula (unknown names, bad bounds, ...).
class DefinitionError : public std::runtime_error {
 public:
  explicit DefinitionError(const std::string& message, SourceSpan span = {});
  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }

 private:
  SourceSpan span_;
  std::string message_;
};

class ParseError : public DefinitionError {
 public:
  ParseError(const std::string& message, SourceSpan span, std::vector<std::string> expected = {});
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::vector<std::string> expected_;
};

/// An update wrote a value outside the target variable's declared range.
class BoundViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No rule of a natural strategy can be executed in some state.
class StrategyIllFormed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state or enumeration cap was hit; the partial count is kept for reporting.
class ResourceLimit : public std::runtime_error {
 public:
  ResourceLimit(const std::string& what, std::size_t partialCount)
      : std::runtime_error(what), partialCount_(partialCount) {}
  std::size_t partialCount() const { return partialCount_; }

 private:
  std::size_t partialCount_;
};

}  // namespace natstrat
