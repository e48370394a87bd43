#include "gll/grammar_dsl.hpp"

#include <cctype>
#include <map>
#include <set>

namespace gll::dsl {

// ---------------------------------------------------------------- AST

bool operator==(const SymbolRef& a, const SymbolRef& b) {
  return a.kind == b.kind && a.ch == b.ch && a.name == b.name && a.args == b.args;
}

bool operator==(const TokenPatternSpec& a, const TokenPatternSpec& b) {
  return a.kind == b.kind && a.ch == b.ch && a.negated == b.negated && a.ranges == b.ranges;
}

bool operator==(const TokenDecl& a, const TokenDecl& b) { return a.name == b.name && a.pattern == b.pattern; }

bool operator==(const PrecedenceDecl& a, const PrecedenceDecl& b) {
  return a.assoc == b.assoc && a.tokens == b.tokens;
}

bool operator==(const Definition& a, const Definition& b) {
  return a.name == b.name && a.params == b.params && a.alternates == b.alternates;
}

bool operator==(const GrammarAst& a, const GrammarAst& b) {
  return a.tokens == b.tokens && a.precedence == b.precedence && a.definitions == b.definitions;
}

bool TokenPatternSpec::accepts(char c) const {
  const auto u = static_cast<unsigned char>(c);
  switch (kind) {
    case Kind::literal:
      return c == ch;
    case Kind::alpha:
      return std::isalpha(u) != 0;
    case Kind::digit:
      return std::isdigit(u) != 0;
    case Kind::any:
      return true;
    case Kind::set:
      break;
  }
  bool in = false;
  for (auto [lo, hi] : ranges) in = in || (u >= static_cast<unsigned char>(lo) && u <= static_cast<unsigned char>(hi));
  return in != negated;
}

const TokenDecl* GrammarAst::find_token(std::string_view name) const {
  for (const auto& t : tokens)
    if (t.name == name) return &t;
  return nullptr;
}

const Definition* GrammarAst::find_definition(std::string_view name) const {
  for (const auto& d : definitions)
    if (d.name == name) return &d;
  return nullptr;
}

SyntaxError::SyntaxError(Location loc, const std::string& message)
    : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + message), loc_(loc) {}

// ---------------------------------------------------------------- lexer

namespace {

struct Lexeme {
  enum class Kind : std::uint8_t { name, literal, directive, set, punct, end };
  Kind kind;
  std::string text;  // name, directive (without %), raw set body, punct char
  char ch = 0;       // literal
  Location loc;
};

std::string describe(const Lexeme& t) {
  switch (t.kind) {
    case Lexeme::Kind::name:
      return "name '" + t.text + "'";
    case Lexeme::Kind::literal:
      return std::string("literal '") + t.ch + "'";
    case Lexeme::Kind::directive:
      return "%" + t.text;
    case Lexeme::Kind::set:
      return "character set";
    case Lexeme::Kind::punct:
      return "'" + t.text + "'";
    case Lexeme::Kind::end:
      return "end of input";
  }
  return "?";
}

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Lexeme> lex(std::string_view src) {
  std::vector<Lexeme> out;
  std::size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](std::size_t n = 1) {
    for (; n > 0 && i < src.size(); --n, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    Location loc{line, col};
    if (name_start(c)) {
      std::size_t j = i;
      while (j < src.size() && name_char(src[j])) ++j;
      out.push_back({Lexeme::Kind::name, std::string(src.substr(i, j - i)), 0, loc});
      advance(j - i);
    } else if (c == '\'') {
      if (i + 2 >= src.size() || src[i + 2] != '\'') throw SyntaxError(loc, "unterminated literal, expected 'c'");
      out.push_back({Lexeme::Kind::literal, {}, src[i + 1], loc});
      advance(3);
    } else if (c == '%') {
      std::size_t j = i + 1;
      while (j < src.size() && name_char(src[j])) ++j;
      if (j == i + 1) throw SyntaxError(loc, "expected directive name after '%'");
      out.push_back({Lexeme::Kind::directive, std::string(src.substr(i + 1, j - i - 1)), 0, loc});
      advance(j - i);
    } else if (c == '[') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != ']' && src[j] != '\n') j += (src[j] == '\\' && j + 1 < src.size()) ? 2 : 1;
      if (j >= src.size() || src[j] != ']') throw SyntaxError(loc, "unterminated character set, expected ']'");
      out.push_back({Lexeme::Kind::set, std::string(src.substr(i + 1, j - i - 1)), 0, loc});
      advance(j + 1 - i);
    } else if (c == '(' || c == ')' || c == ',' || c == ':' || c == '|') {
      out.push_back({Lexeme::Kind::punct, std::string(1, c), 0, loc});
      advance();
    } else {
      throw SyntaxError(loc, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Lexeme::Kind::end, {}, 0, {line, col}});
  return out;
}

TokenPatternSpec parse_set(const std::string& body, Location loc) {
  TokenPatternSpec p;
  p.kind = TokenPatternSpec::Kind::set;
  std::size_t i = 0;
  if (i < body.size() && body[i] == '^') {
    p.negated = true;
    ++i;
  }
  auto next = [&]() {
    char c = body[i++];
    if (c == '\\') {
      if (i >= body.size()) throw SyntaxError(loc, "dangling escape in character set");
      c = body[i++];
    }
    return c;
  };
  while (i < body.size()) {
    char lo = next();
    char hi = lo;
    if (i + 1 < body.size() && body[i] == '-') {
      ++i;
      hi = next();
      if (static_cast<unsigned char>(hi) < static_cast<unsigned char>(lo))
        throw SyntaxError(loc, std::string("empty range ") + lo + "-" + hi + " in character set");
    }
    p.ranges.emplace_back(lo, hi);
  }
  if (p.ranges.empty()) throw SyntaxError(loc, "empty character set");
  return p;
}

class Parser {
 public:
  explicit Parser(std::vector<Lexeme> toks) : t_(std::move(toks)) {}

  GrammarAst grammar() {
    GrammarAst ast;
    while (peek().kind != Lexeme::Kind::end) {
      const Lexeme& t = peek();
      if (t.kind == Lexeme::Kind::directive) {
        if (t.text == "token")
          ast.tokens.push_back(token_decl());
        else if (t.text == "left" || t.text == "right" || t.text == "nonassoc")
          ast.precedence.push_back(prec_decl());
        else
          throw SyntaxError(t.loc, "unknown directive %" + t.text + ", expected %token, %left, %right or %nonassoc");
      } else if (t.kind == Lexeme::Kind::name) {
        ast.definitions.push_back(definition());
      } else {
        throw SyntaxError(t.loc, "expected a declaration or definition, got " + describe(t));
      }
    }
    return ast;
  }

  SymbolRef lone_ref() {
    SymbolRef r = symref();
    expect_end();
    return r;
  }

 private:
  const Lexeme& peek(std::size_t k = 0) const { return t_[std::min(pos_ + k, t_.size() - 1)]; }
  const Lexeme& take() { return t_[std::min(pos_++, t_.size() - 1)]; }

  bool is_punct(const Lexeme& t, char c) const {
    return t.kind == Lexeme::Kind::punct && t.text[0] == c;
  }

  void expect_punct(char c, const char* what) {
    const Lexeme& t = peek();
    if (!is_punct(t, c)) throw SyntaxError(t.loc, std::string("expected ") + what + ", got " + describe(t));
    take();
  }

  void expect_end() {
    if (peek().kind != Lexeme::Kind::end) throw SyntaxError(peek().loc, "expected end of input, got " + describe(peek()));
  }

  std::string expect_name(const char* what) {
    const Lexeme& t = peek();
    if (t.kind != Lexeme::Kind::name) throw SyntaxError(t.loc, std::string("expected ") + what + ", got " + describe(t));
    return take().text;
  }

  TokenDecl token_decl() {
    Location loc = take().loc;
    TokenDecl d;
    d.loc = loc;
    d.name = expect_name("token name after %token");
    const Lexeme& t = peek();
    if (t.kind == Lexeme::Kind::literal) {
      d.pattern.kind = TokenPatternSpec::Kind::literal;
      d.pattern.ch = take().ch;
    } else if (t.kind == Lexeme::Kind::set) {
      d.pattern = parse_set(t.text, t.loc);
      take();
    } else if (t.kind == Lexeme::Kind::directive && (t.text == "alpha" || t.text == "digit" || t.text == "any")) {
      d.pattern.kind = t.text == "alpha"   ? TokenPatternSpec::Kind::alpha
                       : t.text == "digit" ? TokenPatternSpec::Kind::digit
                                           : TokenPatternSpec::Kind::any;
      take();
    } else {
      throw SyntaxError(t.loc, "expected token pattern (literal, [set], %alpha, %digit or %any), got " + describe(t));
    }
    return d;
  }

  PrecedenceDecl prec_decl() {
    const Lexeme& dir = take();
    PrecedenceDecl d;
    d.loc = dir.loc;
    d.assoc = dir.text == "left" ? Assoc::left : dir.text == "right" ? Assoc::right : Assoc::nonassoc;
    while (peek().kind == Lexeme::Kind::literal) d.tokens.push_back(take().ch);
    if (d.tokens.empty()) throw SyntaxError(peek().loc, "expected at least one literal after %" + dir.text);
    return d;
  }

  // NAME [ "(" ... ")" ] ":" starting at the current position
  bool at_definition_start() const {
    if (peek().kind != Lexeme::Kind::name) return false;
    std::size_t k = 1;
    if (is_punct(peek(k), '(')) {
      int depth = 0;
      for (;; ++k) {
        const Lexeme& t = peek(k);
        if (t.kind == Lexeme::Kind::end) return false;
        if (is_punct(t, '(')) ++depth;
        if (is_punct(t, ')') && --depth == 0) break;
      }
      ++k;
    }
    return is_punct(peek(k), ':');
  }

  Definition definition() {
    Definition d;
    d.loc = peek().loc;
    d.name = take().text;
    if (is_punct(peek(), '(')) {
      take();
      d.params.push_back(expect_name("parameter name"));
      while (is_punct(peek(), ',')) {
        take();
        d.params.push_back(expect_name("parameter name"));
      }
      expect_punct(')', "',' or ')' after parameter");
    }
    expect_punct(':', "':' after definition head");
    d.alternates.push_back(alternate());
    while (is_punct(peek(), '|')) {
      take();
      d.alternates.push_back(alternate());
    }
    const Lexeme& t = peek();
    if (t.kind != Lexeme::Kind::end && t.kind != Lexeme::Kind::directive && !at_definition_start())
      throw SyntaxError(t.loc, "expected a symbol, '|' or the next definition, got " + describe(t));
    return d;
  }

  AlternateRefs alternate() {
    AlternateRefs alt;
    for (;;) {
      const Lexeme& t = peek();
      if (t.kind == Lexeme::Kind::literal || (t.kind == Lexeme::Kind::name && !at_definition_start()))
        alt.push_back(symref());
      else
        return alt;
    }
  }

  SymbolRef symref() {
    const Lexeme& t = peek();
    if (t.kind == Lexeme::Kind::literal) {
      take();
      return SymbolRef::literal(t.ch, t.loc);
    }
    if (t.kind != Lexeme::Kind::name) throw SyntaxError(t.loc, "expected a symbol, got " + describe(t));
    take();
    SymbolRef r = SymbolRef::named(t.text, {}, t.loc);
    if (is_punct(peek(), '(')) {
      take();
      r.args.push_back(symref());
      while (is_punct(peek(), ',')) {
        take();
        r.args.push_back(symref());
      }
      expect_punct(')', "',' or ')' in argument list");
    }
    return r;
  }

  std::vector<Lexeme> t_;
  std::size_t pos_ = 0;
};

}  // namespace

GrammarAst parse_grammar(std::string_view text) { return Parser(lex(text)).grammar(); }

SymbolRef parse_symbol_ref(std::string_view text) { return Parser(lex(text)).lone_ref(); }

// ---------------------------------------------------------------- validation

std::string to_string(Diagnostic::Kind k) {
  switch (k) {
    case Diagnostic::Kind::undefined_name:
      return "undefined-name";
    case Diagnostic::Kind::arity_mismatch:
      return "arity-mismatch";
    case Diagnostic::Kind::duplicate_definition:
      return "duplicate-definition";
    case Diagnostic::Kind::duplicate_parameter:
      return "duplicate-parameter";
    case Diagnostic::Kind::reserved_name:
      return "reserved-name";
  }
  return "?";
}

std::string render(const Diagnostic& d) {
  return std::to_string(d.loc.line) + ":" + std::to_string(d.loc.column) + ": " + d.message;
}

namespace {

class Validator {
 public:
  explicit Validator(const GrammarAst& ast) : ast_(ast) {}

  std::vector<Diagnostic> run() {
    std::map<std::string, Location> seen;
    auto declare = [&](const std::string& name, Location loc, const char* what) {
      if (name == start_name) add(Diagnostic::Kind::reserved_name, loc, "name " + name + " is reserved");
      auto [it, fresh] = seen.emplace(name, loc);
      if (!fresh)
        add(Diagnostic::Kind::duplicate_definition, loc,
            std::string(what) + " " + name + " already defined at " + std::to_string(it->second.line) + ":" +
                std::to_string(it->second.column));
    };
    for (const auto& t : ast_.tokens) declare(t.name, t.loc, "token");
    for (const auto& d : ast_.definitions) declare(d.name, d.loc, "nonterminal");

    std::map<char, Location> prec;
    for (const auto& p : ast_.precedence)
      for (char c : p.tokens)
        if (auto [it, fresh] = prec.emplace(c, p.loc); !fresh)
          add(Diagnostic::Kind::duplicate_definition, p.loc,
              std::string("precedence of '") + c + "' already declared at " + std::to_string(it->second.line) + ":" +
                  std::to_string(it->second.column));

    for (const auto& d : ast_.definitions) {
      std::set<std::string> formals;
      for (const auto& f : d.params)
        if (!formals.insert(f).second)
          add(Diagnostic::Kind::duplicate_parameter, d.loc, "parameter " + f + " repeated in " + d.name);
      for (const auto& alt : d.alternates)
        for (const auto& r : alt) check(r, formals);
    }
    return std::move(out_);
  }

  std::vector<Diagnostic> check_only(const SymbolRef& r) {
    check(r, {});
    return std::move(out_);
  }

 private:
  void check(const SymbolRef& r, const std::set<std::string>& formals) {
    if (r.kind == SymbolRef::Kind::literal) return;
    for (const auto& a : r.args) check(a, formals);
    if (formals.contains(r.name)) {
      if (!r.args.empty())
        add(Diagnostic::Kind::arity_mismatch, r.loc, "parameter " + r.name + " cannot be applied to arguments");
      return;
    }
    if (ast_.find_token(r.name)) {
      if (!r.args.empty())
        add(Diagnostic::Kind::arity_mismatch, r.loc, "token " + r.name + " cannot be applied to arguments");
      return;
    }
    if (const Definition* d = ast_.find_definition(r.name)) {
      if (d->params.size() != r.args.size())
        add(Diagnostic::Kind::arity_mismatch, r.loc,
            r.name + " expects " + std::to_string(d->params.size()) + " argument(s), got " +
                std::to_string(r.args.size()));
      return;
    }
    add(Diagnostic::Kind::undefined_name, r.loc, "undefined name " + r.name);
  }

  void add(Diagnostic::Kind k, Location loc, std::string msg) { out_.push_back({k, loc, std::move(msg)}); }

  const GrammarAst& ast_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate(const GrammarAst& ast) { return Validator(ast).run(); }

// ---------------------------------------------------------------- rendering

std::string render(const SymbolRef& ref) {
  if (ref.kind == SymbolRef::Kind::literal) return std::string("'") + ref.ch + "'";
  std::string out = ref.name;
  if (!ref.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < ref.args.size(); ++i) {
      if (i) out += ", ";
      out += render(ref.args[i]);
    }
    out += ')';
  }
  return out;
}

std::string render(const TokenPatternSpec& p) {
  switch (p.kind) {
    case TokenPatternSpec::Kind::literal:
      return std::string("'") + p.ch + "'";
    case TokenPatternSpec::Kind::alpha:
      return "%alpha";
    case TokenPatternSpec::Kind::digit:
      return "%digit";
    case TokenPatternSpec::Kind::any:
      return "%any";
    case TokenPatternSpec::Kind::set:
      break;
  }
  auto esc = [](char c) {
    if (c == ']' || c == '\\' || c == '-' || c == '^') return std::string("\\") + c;
    return std::string(1, c);
  };
  std::string out = "[";
  if (p.negated) out += '^';
  for (auto [lo, hi] : p.ranges) {
    out += esc(lo);
    if (hi != lo) out += '-' + esc(hi);
  }
  return out + "]";
}

std::string render(const GrammarAst& ast) {
  std::string out;
  for (const auto& t : ast.tokens) out += "%token " + t.name + " " + render(t.pattern) + "\n";
  for (const auto& p : ast.precedence) {
    out += p.assoc == Assoc::left ? "%left" : p.assoc == Assoc::right ? "%right" : "%nonassoc";
    for (char c : p.tokens) out += std::string(" '") + c + "'";
    out += "\n";
  }
  for (const auto& d : ast.definitions) {
    out += d.name;
    if (!d.params.empty()) {
      out += '(';
      for (std::size_t i = 0; i < d.params.size(); ++i) out += (i ? ", " : "") + d.params[i];
      out += ')';
    }
    out += ":";
    for (std::size_t a = 0; a < d.alternates.size(); ++a) {
      if (a) out += "\n  |";
      for (const auto& r : d.alternates[a]) out += " " + render(r);
    }
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------- elaboration

std::vector<Token> tokenize(std::string_view text, TokenMode mode) {
  return mode == TokenMode::chars ? char_tokens(text) : word_tokens(text);
}

CompiledGrammar::CompiledGrammar(CompiledGrammar&&) noexcept = default;
CompiledGrammar& CompiledGrammar::operator=(CompiledGrammar&&) noexcept = default;
CompiledGrammar::~CompiledGrammar() = default;

namespace {

TokenPattern declared_pattern(const TokenDecl& d, TokenMode mode) {
  if (mode == TokenMode::words) return TokenPattern::exact(d.name, d.name);
  return TokenPattern::char_class(d.name, [spec = d.pattern](char c) { return spec.accepts(c); });
}

struct Env {
  const std::vector<std::string>* formals = nullptr;
  std::span<const Symbol> args;
};

Symbol build(Grammar& g, const GrammarAst& ast, TokenMode mode, const SymbolRef& r, const Env& env) {
  if (r.kind == SymbolRef::Kind::literal) return g.literal(r.ch);
  if (env.formals)
    for (std::size_t i = 0; i < env.formals->size(); ++i)
      if ((*env.formals)[i] == r.name) return env.args[i];
  if (const TokenDecl* t = ast.find_token(r.name)) return g.token(declared_pattern(*t, mode));
  std::vector<Symbol> args;
  args.reserve(r.args.size());
  for (const auto& a : r.args) args.push_back(build(g, ast, mode, a, env));
  return g.lazy(r.name, args);
}

}  // namespace

CompiledGrammar elaborate(const GrammarAst& ast, TokenMode mode) {
  if (auto diags = validate(ast); !diags.empty()) {
    std::string msg = "grammar has " + std::to_string(diags.size()) + " error(s); first: " + render(diags[0]);
    throw ElaborationError(msg, std::move(diags));
  }
  CompiledGrammar cg;
  cg.ast_ = std::make_shared<const GrammarAst>(ast);
  cg.grammar_ = std::make_unique<Grammar>();
  cg.mode_ = mode;
  for (const Definition& d : cg.ast_->definitions) {
    cg.grammar_->define(d.name, d.params.size(),
                        [ast = cg.ast_, def = &d, mode](Grammar& g, std::span<const Symbol> args) {
                          Env env{&def->params, args};
                          std::vector<Grammar::Alternate> alts;
                          for (const auto& alt : def->alternates) {
                            Grammar::Alternate a;
                            for (const auto& r : alt) a.push_back(build(g, *ast, mode, r, env));
                            alts.push_back(std::move(a));
                          }
                          return alts;
                        });
  }
  for (const auto& p : cg.ast_->precedence) {
    std::vector<SymbolId> ids;
    for (char c : p.tokens) ids.push_back(SymbolId::token(TokenPattern::literal(c).name()));
    cg.precedence_.add_level(p.assoc, ids);
  }
  if (!cg.precedence_.empty()) cg.filters_.push_back(precedence_filter(cg.precedence_));
  return cg;
}

Symbol CompiledGrammar::symbol(const SymbolRef& ref) {
  auto diags = Validator(*ast_).check_only(ref);
  if (!diags.empty()) throw ElaborationError("unresolved start symbol " + render(ref) + ": " + diags[0].message, diags);
  return build(*grammar_, *ast_, mode_, ref, {});
}

}  // namespace gll::dsl
