#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "natstrat/errors.hpp"

namespace natstrat::detail {

enum class TokenKind { Ident, Int, String, Punct, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  long long value = 0;
  SourceSpan span;

  bool is(std::string_view punct) const { return kind == TokenKind::Punct && text == punct; }
  bool isWord(std::string_view word) const { return kind == TokenKind::Ident && text == word; }
};

/// Always ends with an End token. Throws ParseError.
std::vector<Token> lex(std::string_view text, const std::string& file);

std::string describe(const Token& t);

}  // namespace natstrat::detail
