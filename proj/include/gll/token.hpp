#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gll {

// A token is a character (char mode) or a whitespace-delimited word (words
// mode); both are carried as strings.
using Token = std::string;

// Pure classifier over tokens plus the name the pattern is known by.
class TokenPattern {
 public:
  using Classifier = std::function<std::optional<Token>(const Token&)>;

  TokenPattern(std::string name, Classifier classify) : name_(std::move(name)), classify_(std::move(classify)) {}

  // Matches the single-character token c; named "'c'".
  static TokenPattern literal(char c);
  // Matches a token equal to `text`; named `name`.
  static TokenPattern exact(std::string name, std::string text);
  // Matches single-character tokens accepted by `pred`.
  static TokenPattern char_class(std::string name, std::function<bool(char)> pred);

  const std::string& name() const noexcept { return name_; }
  std::optional<Token> classify(const Token& t) const { return classify_(t); }
  bool accepts(const Token& t) const { return classify_(t).has_value(); }

 private:
  std::string name_;
  Classifier classify_;
};

// Splits text into tokens: one per byte.
std::vector<Token> char_tokens(std::string_view text);
// Splits text on whitespace.
std::vector<Token> word_tokens(std::string_view text);

}  // namespace gll
