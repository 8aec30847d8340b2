#include "dsl_lexer.hpp"

#include <array>
#include <cctype>
#include <limits>

namespace natstrat::detail {

namespace {

constexpr std::array<std::string_view, 10> kTwoChar = {"<<", ">>", "->", ":=", "&&", "||", "==", "!=", "<=", ">="};
constexpr std::string_view kOneChar = "{}()[];,=!<>+-*@.^?:";

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool identChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

std::vector<Token> lex(std::string_view text, const std::string& file) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto here = [&]() { return SourceSpan{file, line, col, line, col}; };

  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (text.substr(i, 2) == "//" || c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (text.substr(i, 2) == "/*") {
      const SourceSpan start = here();
      const auto end = text.find("*/", i + 2);
      if (end == std::string_view::npos) throw ParseError("unterminated comment", start, {"*/"});
      advance(end + 2 - i);
      continue;
    }
    Token t;
    t.span = here();
    if (identStart(c)) {
      std::size_t j = i;
      while (j < text.size() && identChar(text[j])) ++j;
      t.kind = TokenKind::Ident;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      long long v = 0;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        v = v * 10 + (text[j] - '0');
        if (v > std::numeric_limits<int>::max()) throw ParseError("integer literal too large", t.span);
        ++j;
      }
      if (j < text.size() && identStart(text[j])) throw ParseError("malformed number", t.span);
      t.kind = TokenKind::Int;
      t.text = std::string(text.substr(i, j - i));
      t.value = v;
      advance(j - i);
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '"' && text[j] != '\n') ++j;
      if (j >= text.size() || text[j] != '"') throw ParseError("unterminated string", t.span, {"\""});
      t.kind = TokenKind::String;
      t.text = std::string(text.substr(i + 1, j - i - 1));
      advance(j + 1 - i);
    } else {
      t.kind = TokenKind::Punct;
      for (auto two : kTwoChar)
        if (text.substr(i, 2) == two) t.text = std::string(two);
      if (t.text.empty()) {
        if (kOneChar.find(c) == std::string_view::npos) {
          std::string shown = std::isprint(static_cast<unsigned char>(c)) ? std::string(1, c) : "\\x" + std::to_string(static_cast<unsigned char>(c));
          throw ParseError("unexpected character '" + shown + "'", t.span);
        }
        t.text = std::string(1, c);
      }
      advance(t.text.size());
    }
    t.span.endLine = line;
    t.span.endColumn = col;
    out.push_back(std::move(t));
  }
  Token end;
  end.span = here();
  out.push_back(end);
  return out;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::End: return "end of input";
    case TokenKind::String: return "string \"" + t.text + "\"";
    default: return "'" + t.text + "'";
  }
}

}  // namespace natstrat::detail
