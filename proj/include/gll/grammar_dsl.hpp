#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gll/forest.hpp"
#include "gll/symbol.hpp"
#include "gll/token.hpp"

namespace gll::dsl {

struct Location {
  int line = 0;
  int column = 0;
};

// 'c', NAME or NAME(arg, ...)
struct SymbolRef {
  enum class Kind : std::uint8_t { literal, name };
  Kind kind = Kind::name;
  char ch = 0;
  std::string name;
  std::vector<SymbolRef> args;
  Location loc;

  static SymbolRef literal(char c, Location loc = {}) { return {Kind::literal, c, {}, {}, loc}; }
  static SymbolRef named(std::string n, std::vector<SymbolRef> args = {}, Location loc = {}) {
    return {Kind::name, 0, std::move(n), std::move(args), loc};
  }
};
bool operator==(const SymbolRef& a, const SymbolRef& b);

struct TokenPatternSpec {
  enum class Kind : std::uint8_t { literal, set, alpha, digit, any };
  Kind kind = Kind::literal;
  char ch = 0;  // literal
  bool negated = false;
  std::vector<std::pair<char, char>> ranges;  // set, inclusive

  bool accepts(char c) const;
};
bool operator==(const TokenPatternSpec& a, const TokenPatternSpec& b);

struct TokenDecl {
  std::string name;
  TokenPatternSpec pattern;
  Location loc;
};
bool operator==(const TokenDecl& a, const TokenDecl& b);

struct PrecedenceDecl {
  Assoc assoc = Assoc::left;
  std::vector<char> tokens;
  Location loc;
};
bool operator==(const PrecedenceDecl& a, const PrecedenceDecl& b);

using AlternateRefs = std::vector<SymbolRef>;

struct Definition {
  std::string name;
  std::vector<std::string> params;
  std::vector<AlternateRefs> alternates;
  Location loc;
};
bool operator==(const Definition& a, const Definition& b);

// Declarations of each kind in source order.  Equality ignores locations.
struct GrammarAst {
  std::vector<TokenDecl> tokens;
  std::vector<PrecedenceDecl> precedence;
  std::vector<Definition> definitions;

  const TokenDecl* find_token(std::string_view name) const;
  const Definition* find_definition(std::string_view name) const;
};
bool operator==(const GrammarAst& a, const GrammarAst& b);

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(Location loc, const std::string& message);
  Location location() const noexcept { return loc_; }

 private:
  Location loc_;
};

GrammarAst parse_grammar(std::string_view text);
// A lone symbol reference, e.g. a start symbol given on the command line.
SymbolRef parse_symbol_ref(std::string_view text);

struct Diagnostic {
  enum class Kind : std::uint8_t {
    undefined_name,
    arity_mismatch,
    duplicate_definition,
    duplicate_parameter,
    reserved_name,
  };
  Kind kind;
  Location loc;
  std::string message;
};

std::string to_string(Diagnostic::Kind k);
// "line:col: message"
std::string render(const Diagnostic& d);

std::vector<Diagnostic> validate(const GrammarAst& ast);

// Canonical text; parse_grammar(render(ast)) == ast.
std::string render(const GrammarAst& ast);
std::string render(const SymbolRef& ref);
std::string render(const TokenPatternSpec& p);

// char: one token per byte, literals and classes match characters.
// words: whitespace-separated words; a declared token matches the word equal
// to its name, a literal 'c' matches the word "c".
enum class TokenMode : std::uint8_t { chars, words };

std::vector<Token> tokenize(std::string_view text, TokenMode mode);

class ElaborationError : public std::runtime_error {
 public:
  explicit ElaborationError(const std::string& message, std::vector<Diagnostic> diagnostics = {})
      : std::runtime_error(message), diagnostics_(std::move(diagnostics)) {}
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

// A validated grammar registered with an engine Grammar.  Definitions are
// instantiated lazily, so elaborating a grammar whose definitions apply
// themselves to ever larger arguments terminates.
class CompiledGrammar {
 public:
  CompiledGrammar(CompiledGrammar&&) noexcept;
  CompiledGrammar& operator=(CompiledGrammar&&) noexcept;
  ~CompiledGrammar();

  // The symbol for a reference resolved at top level (no formals in scope).
  // Throws ElaborationError if it does not resolve or has the wrong arity.
  Symbol symbol(const SymbolRef& ref);
  Symbol symbol(std::string_view ref_text) { return symbol(parse_symbol_ref(ref_text)); }

  Grammar& grammar() noexcept { return *grammar_; }
  const GrammarAst& ast() const noexcept { return *ast_; }
  TokenMode mode() const noexcept { return mode_; }
  const PrecedenceTable& precedence() const noexcept { return precedence_; }
  // The precedence filter when any precedence is declared; else empty.
  const std::vector<Filter>& filters() const noexcept { return filters_; }

 private:
  friend CompiledGrammar elaborate(const GrammarAst& ast, TokenMode mode);
  CompiledGrammar() = default;

  std::shared_ptr<const GrammarAst> ast_;
  std::unique_ptr<Grammar> grammar_;
  TokenMode mode_ = TokenMode::chars;
  PrecedenceTable precedence_;
  std::vector<Filter> filters_;
};

// Throws ElaborationError carrying the diagnostics if validate(ast) fails.
CompiledGrammar elaborate(const GrammarAst& ast, TokenMode mode = TokenMode::chars);

}  // namespace gll::dsl
