#include "natstrat/errors.hpp"

#include <sstream>

namespace natstrat {

std::string SourceSpan::str() const {
  if (!known()) return file.empty() ? std::string("<unknown>") : file;
  std::ostringstream out;
  out << (file.empty() ? "<input>" : file) << ':' << line << ':' << column;
  return out.str();
}

namespace {
std::string withLocation(const std::string& message, const SourceSpan& span) {
  if (!span.known()) return message;
  return span.str() + ": " + message;
}
}  // namespace

DefinitionError::DefinitionError(const std::string& message, SourceSpan span)
    : std::runtime_error(withLocation(message, span)), span_(std::move(span)), message_(message) {}

ParseError::ParseError(const std::string& message, SourceSpan span, std::vector<std::string> expected)
    : DefinitionError(message, std::move(span)), expected_(std::move(expected)) {}

}  // namespace natstrat
