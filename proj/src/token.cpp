#include "gll/token.hpp"

#include <cctype>

namespace gll {

TokenPattern TokenPattern::literal(char c) {
  return TokenPattern(std::string("'") + c + "'", [c](const Token& t) -> std::optional<Token> {
    if (t.size() == 1 && t[0] == c) return t;
    return std::nullopt;
  });
}

TokenPattern TokenPattern::exact(std::string name, std::string text) {
  return TokenPattern(std::move(name), [text = std::move(text)](const Token& t) -> std::optional<Token> {
    if (t == text) return t;
    return std::nullopt;
  });
}

TokenPattern TokenPattern::char_class(std::string name, std::function<bool(char)> pred) {
  return TokenPattern(std::move(name), [pred = std::move(pred)](const Token& t) -> std::optional<Token> {
    if (t.size() == 1 && pred(t[0])) return t;
    return std::nullopt;
  });
}

std::vector<Token> char_tokens(std::string_view text) {
  std::vector<Token> out;
  out.reserve(text.size());
  for (char c : text) out.emplace_back(1, c);
  return out;
}

std::vector<Token> word_tokens(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace gll
