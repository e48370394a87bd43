#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "gll/engine.hpp"
#include "gll/grammar_dsl.hpp"
#include "oracles.hpp"

using namespace gll;
using namespace gll::dsl;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string corpus(const std::string& name) { return slurp(std::filesystem::path(GLL_GRAMMAR_DIR) / name); }

bool accepts(CompiledGrammar& g, const std::string& start, std::string_view text, ParseOptions opts = {}) {
  return run_recognize(g.symbol(start), tokenize(text, g.mode()), opts).accepted;
}

std::vector<Diagnostic::Kind> kinds(const std::vector<Diagnostic>& ds) {
  std::vector<Diagnostic::Kind> out;
  for (const auto& d : ds) out.push_back(d.kind);
  return out;
}

}  // namespace

TEST_CASE("parse_grammar examples") {
  auto csv = parse_grammar("CSV(v): CSV(v) ',' CSV(v) | v");
  REQUIRE(csv.definitions.size() == 1);
  const Definition& d = csv.definitions[0];
  CHECK(d.name == "CSV");
  CHECK(d.params == std::vector<std::string>{"v"});
  REQUIRE(d.alternates.size() == 2);
  CHECK(d.alternates[0].size() == 3);
  CHECK(d.alternates[1].size() == 1);
  CHECK(d.alternates[0][0] == SymbolRef::named("CSV", {SymbolRef::named("v")}));
  CHECK(d.alternates[0][1] == SymbolRef::literal(','));

  auto within = parse_grammar("Within(l,r,x): l x r");
  REQUIRE(within.definitions.size() == 1);
  CHECK(within.definitions[0].params.size() == 3);
  CHECK(within.definitions[0].alternates.size() == 1);

  auto eps = parse_grammar("X: X |");
  REQUIRE(eps.definitions.size() == 1);
  REQUIRE(eps.definitions[0].alternates.size() == 2);
  CHECK(eps.definitions[0].alternates[1].empty());
}

TEST_CASE("alternates end where the next definition head starts") {
  auto ast = parse_grammar("A: B C\nB: 'b'\nC(x): x\nD: C('d') A\n  | C(B)\n");
  REQUIRE(ast.definitions.size() == 4);
  CHECK(ast.definitions[0].alternates[0].size() == 2);
  CHECK(ast.definitions[2].params == std::vector<std::string>{"x"});
  CHECK(ast.definitions[3].alternates.size() == 2);
  CHECK(ast.definitions[3].alternates[0][0] == SymbolRef::named("C", {SymbolRef::literal('d')}));
}

TEST_CASE("declarations, comments and locations") {
  auto ast = parse_grammar(
      "-- header\n"
      "%token alpha [a-zA-Z_]  -- letters\n"
      "%token d %digit\n"
      "%token notq [^'\\]]\n"
      "%left '+' '-'\n"
      "%right '^'\n"
      "S: alpha '-' '-' d  -- trailing\n");
  REQUIRE(ast.tokens.size() == 3);
  CHECK(ast.tokens[0].loc.line == 2);
  CHECK(ast.tokens[0].loc.column == 1);
  const auto& letters = ast.tokens[0].pattern;
  CHECK(letters.kind == TokenPatternSpec::Kind::set);
  CHECK(letters.accepts('q'));
  CHECK(letters.accepts('Q'));
  CHECK(letters.accepts('_'));
  CHECK_FALSE(letters.accepts('1'));
  CHECK(ast.tokens[1].pattern.accepts('7'));
  CHECK(ast.tokens[2].pattern.negated);
  CHECK_FALSE(ast.tokens[2].pattern.accepts(']'));
  CHECK_FALSE(ast.tokens[2].pattern.accepts('\''));
  CHECK(ast.tokens[2].pattern.accepts('x'));
  REQUIRE(ast.precedence.size() == 2);
  CHECK(ast.precedence[0].tokens == std::vector<char>{'+', '-'});
  CHECK(ast.precedence[1].assoc == Assoc::right);
  REQUIRE(ast.definitions.size() == 1);
  CHECK(ast.definitions[0].alternates[0].size() == 4);
  CHECK(ast.definitions[0].alternates[0][3].loc.line == 7);
  CHECK(ast.definitions[0].alternates[0][3].loc.column == 18);
}

TEST_CASE("syntax errors carry line and column") {
  auto error_at = [](std::string_view text) -> std::pair<int, int> {
    try {
      parse_grammar(text);
    } catch (const SyntaxError& e) {
      return {e.location().line, e.location().column};
    }
    return {0, 0};
  };
  CHECK(error_at("S: 'a' )") == std::pair{1, 8});
  CHECK(error_at("S: 'a'\n%token x\n") == std::pair{3, 1});
  CHECK(error_at("S(: 'a'") == std::pair{1, 3});
  CHECK(error_at("S 'a'") == std::pair{1, 3});
  CHECK(error_at("S: 'a\n") == std::pair{1, 4});
  CHECK(error_at("S: F('a'") == std::pair{1, 9});
  CHECK(error_at("%token x [z-a]") == std::pair{1, 10});
  CHECK(error_at("%prec '+'") == std::pair{1, 1});
  CHECK(error_at("%left S: 'a'") == std::pair{1, 7});
  CHECK(error_at("S: #") == std::pair{1, 4});
  try {
    parse_grammar("S: 'a' )");
  } catch (const SyntaxError& e) {
    CHECK(std::string(e.what()).starts_with("1:8: expected"));
  }
}

TEST_CASE("validate") {
  CHECK(validate(parse_grammar(corpus("reuse.g"))).empty());
  CHECK(validate(parse_grammar(corpus("tuples.g"))).empty());

  auto undefined = validate(parse_grammar("S: T"));
  REQUIRE(undefined.size() == 1);
  CHECK(undefined[0].kind == Diagnostic::Kind::undefined_name);
  CHECK(render(undefined[0]) == "1:4: undefined name T");

  auto arity = validate(parse_grammar("Within(l, r, x): l x r\nS: Within('(', ')')"));
  CHECK(kinds(arity) == std::vector{Diagnostic::Kind::arity_mismatch});

  CHECK(kinds(validate(parse_grammar("S: 'a'\nS: 'b'"))) == std::vector{Diagnostic::Kind::duplicate_definition});
  CHECK(kinds(validate(parse_grammar("%token S 'a'\nS: 'b'"))) == std::vector{Diagnostic::Kind::duplicate_definition});
  CHECK(kinds(validate(parse_grammar("__START: 'a'"))) == std::vector{Diagnostic::Kind::reserved_name});
  CHECK(kinds(validate(parse_grammar("P(x, x): x"))) == std::vector{Diagnostic::Kind::duplicate_parameter});
  CHECK(kinds(validate(parse_grammar("P(x): x('a')"))) == std::vector{Diagnostic::Kind::arity_mismatch});
  CHECK(kinds(validate(parse_grammar("%token t 'a'\nP: t(t)"))) == std::vector{Diagnostic::Kind::arity_mismatch});
  CHECK(kinds(validate(parse_grammar("%left '+'\n%right '+'\nS: 'a'"))) ==
        std::vector{Diagnostic::Kind::duplicate_definition});
  // formals are scoped to their definition
  CHECK(kinds(validate(parse_grammar("P(x): x\nQ: x"))) == std::vector{Diagnostic::Kind::undefined_name});
  // one diagnostic per violation
  CHECK(validate(parse_grammar("S: A B C(D)")).size() == 4);
}

TEST_CASE("round trip over the corpus") {
  int files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(GLL_GRAMMAR_DIR)) {
    if (entry.path().extension() != ".g") continue;
    auto ast = parse_grammar(slurp(entry.path()));
    CHECK_MESSAGE(parse_grammar(render(ast)) == ast, entry.path().string());
    CHECK(render(parse_grammar(render(ast))) == render(ast));
    CHECK(validate(ast).empty());
    ++files;
  }
  CHECK(files >= 12);
}

TEST_CASE("round trip over random grammars") {
  std::mt19937 rng(7);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  const std::string printable = "abcxyz+-*()[],:|'%\\^ $";
  std::function<SymbolRef(int)> ref = [&](int depth) {
    if (pick(3) == 0) return SymbolRef::literal(printable[pick(static_cast<int>(printable.size()))]);
    SymbolRef r = SymbolRef::named(std::string(1, "ABCDxy"[pick(6)]) + std::to_string(pick(3)));
    if (depth < 2 && pick(3) == 0)
      for (int k = pick(3) + 1; k > 0; --k) r.args.push_back(ref(depth + 1));
    return r;
  };
  for (int trial = 0; trial < 300; ++trial) {
    GrammarAst ast;
    for (int t = pick(3); t > 0; --t) {
      TokenDecl d;
      d.name = "tok" + std::to_string(t);
      d.pattern.kind = static_cast<TokenPatternSpec::Kind>(pick(5));
      d.pattern.ch = printable[pick(static_cast<int>(printable.size()))];
      if (d.pattern.kind == TokenPatternSpec::Kind::set) {
        d.pattern.negated = pick(2);
        for (int k = pick(3) + 1; k > 0; --k) {
          char lo = printable[pick(static_cast<int>(printable.size()))];
          d.pattern.ranges.emplace_back(lo, pick(2) ? lo : static_cast<char>(std::min(lo + pick(5), 126)));
        }
      }
      if (d.pattern.kind != TokenPatternSpec::Kind::literal) d.pattern.ch = 0;
      ast.tokens.push_back(d);
    }
    for (int p = pick(3); p > 0; --p) {
      PrecedenceDecl d;
      d.assoc = static_cast<Assoc>(pick(3));
      for (int k = pick(3) + 1; k > 0; --k) d.tokens.push_back(printable[pick(static_cast<int>(printable.size()))]);
      ast.precedence.push_back(d);
    }
    for (int n = pick(4) + 1; n > 0; --n) {
      Definition d;
      d.name = "N" + std::to_string(n);
      for (int k = pick(3); k > 0; --k) d.params.push_back("p" + std::to_string(k));
      for (int a = pick(3) + 1; a > 0; --a) {
        AlternateRefs alt;
        for (int k = pick(4); k > 0; --k) alt.push_back(ref(0));
        d.alternates.push_back(alt);
      }
      ast.definitions.push_back(d);
    }
    std::string text = render(ast);
    GrammarAst back;
    REQUIRE_NOTHROW_MESSAGE(back = parse_grammar(text), text);
    CHECK_MESSAGE(back == ast, text);
  }
}

TEST_CASE("elaborate the tuple grammar") {
  auto g = elaborate(parse_grammar(corpus("tuples.g")));
  CHECK(accepts(g, "AlphaTuples", "(a,b)"));
  CHECK(accepts(g, "AlphaTuples", "()"));
  CHECK(accepts(g, "AlphaTuples", "(Q)"));
  CHECK_FALSE(accepts(g, "AlphaTuples", "(a,)"));
  CHECK_FALSE(accepts(g, "AlphaTuples", "(a b)"));
  CHECK_FALSE(accepts(g, "AlphaTuples", "(1)"));
  // any nonterminal can be the start
  CHECK(accepts(g, "Alphas", "x,y,z"));
  CHECK(accepts(g, "MAlphas", ""));
  CHECK(accepts(g, "alpha", "k"));
}

TEST_CASE("elaborate parameterized definitions") {
  auto g = elaborate(parse_grammar(corpus("csv.g")));
  Symbol s = g.symbol("CSV(alpha)");
  CHECK(s.id() == SymbolId::applied("CSV", {SymbolId::token("alpha")}));
  CHECK(s.id().str() == "CSV(alpha)");
  CHECK(g.symbol("Letters").id() == SymbolId::applied("Letters"));
  CHECK(accepts(g, "CSV(alpha)", "a,b,c"));
  CHECK(accepts(g, "CSV(',')", ",,,"));
  CHECK(accepts(g, "Letters", "x"));
  CHECK_FALSE(accepts(g, "Letters", "x,"));

  auto r = elaborate(parse_grammar(corpus("reuse.g")));
  CHECK(accepts(r, "AlphaTuples", "(a,b,c)"));
  CHECK(accepts(r, "AlphaTuples", "()"));
  CHECK(accepts(r, "AlphaLists", "[x]"));
  CHECK_FALSE(accepts(r, "AlphaLists", "(x)"));
  CHECK(accepts(r, "Nested", "([a,b],[],[c])"));
  CHECK_FALSE(accepts(r, "Nested", "([a,b],[],c)"));
  CHECK(accepts(r, "Tuples('z')", "(z,z)"));
}

TEST_CASE("instantiation is memoized") {
  auto g = elaborate(parse_grammar(corpus("reuse.g")));
  CHECK(g.grammar().instantiation_count() == 0);
  Symbol a = g.symbol("Nested");
  Symbol b = g.symbol("Nested");
  CHECK(a == b);
  CHECK(accepts(g, "Nested", "([a],[b,c])"));
  const auto after = g.grammar().instantiation_count();
  // Nested, Tuples(Lists(alpha)), Parens(..), Within(..), Optional(..), Multiple(..),
  // Lists(alpha), Brackets(..), Within(..), Optional(..), Multiple(..)
  CHECK(after == 11);
  CHECK(accepts(g, "Nested", "([a],[b,c],[])"));
  CHECK(g.grammar().instantiation_count() == after);
  CHECK(g.grammar().find(SymbolId::applied("Lists", {SymbolId::token("alpha")})).has_value());
}

TEST_CASE("elaboration is lazy for self-instantiating definitions") {
  auto t0 = std::chrono::steady_clock::now();
  auto g = elaborate(parse_grammar(corpus("anbncn.g")));
  Symbol s = g.symbol("Start");
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(1));
  CHECK(g.grammar().instantiation_count() == 0);
  ParseOptions opts;
  opts.instantiation_limit = 2000;
  try {
    run_recognize(s, tokenize("abc", g.mode()), opts);
    FAIL("expected the run to exhaust its budget");
  } catch (const ResourceExhausted& e) {
    CHECK(e.meter() == ResourceExhausted::Meter::instantiations);
  }
  ParseOptions fuel;
  fuel.fuel = 5000;
  CHECK_THROWS_AS(run_recognize(g.symbol("Start"), tokenize("aabbcc", g.mode()), fuel), ResourceExhausted);
}

TEST_CASE("right-recursive higher-order grammar") {
  auto g = elaborate(parse_grammar(corpus("bac.g")));
  for (std::string s : {"a", "a(a)", "a(a)((a))", "a(a)((a))(((a)))"}) CHECK_MESSAGE(accepts(g, "Start", s), s);
  for (std::string s : {"", "(a)", "a(a)(a)", "a((a))", "a(a)((a)", "aa"}) CHECK_FALSE_MESSAGE(accepts(g, "Start", s), s);
}

TEST_CASE("permutation phrases") {
  auto g = elaborate(parse_grammar(corpus("permutations.g")));
  for (const auto& s : oracle::all_strings("12345", 5)) {
    std::set<char> distinct(s.begin(), s.end());
    bool expect = distinct.size() == s.size() && s.find('5') == std::string::npos;
    CHECK_MESSAGE(accepts(g, "Permutations", s) == expect, s);
  }
}

TEST_CASE("words mode") {
  auto g = elaborate(parse_grammar(corpus("words.g")), TokenMode::words);
  CHECK(tokenize("x  plus\tx times x\n", TokenMode::words) == std::vector<Token>{"x", "plus", "x", "times", "x"});
  CHECK(accepts(g, "Sum", "x plus x times x"));
  CHECK(accepts(g, "Sum", "x"));
  CHECK_FALSE(accepts(g, "Sum", "x plus"));
  CHECK_FALSE(accepts(g, "Sum", "y"));
  auto lit = elaborate(parse_grammar("S: 'a' S 'b' |"), TokenMode::words);
  CHECK(accepts(lit, "S", "a a b b"));
  CHECK_FALSE(accepts(lit, "S", "aabb"));
}

TEST_CASE("elaboration errors") {
  CHECK_THROWS_AS(elaborate(parse_grammar("S: T")), ElaborationError);
  try {
    elaborate(parse_grammar("S: T U"));
  } catch (const ElaborationError& e) {
    CHECK(e.diagnostics().size() == 2);
  }
  auto g = elaborate(parse_grammar(corpus("csv.g")));
  CHECK_THROWS_AS(g.symbol("Nope"), ElaborationError);
  CHECK_THROWS_AS(g.symbol("CSV"), ElaborationError);
  CHECK_THROWS_AS(g.symbol("CSV(alpha, alpha)"), ElaborationError);
  CHECK_THROWS_AS(g.symbol("CSV(v)"), ElaborationError);
  CHECK_THROWS_AS(g.symbol("CSV("), SyntaxError);
}

TEST_CASE("precedence declarations become a filter") {
  auto g = elaborate(parse_grammar(corpus("arith.g")));
  REQUIRE(g.filters().size() == 1);
  Symbol e = g.symbol("Exp");
  auto trees_of = [&](std::string_view text) {
    auto in = tokenize(text, g.mode());
    auto res = run_recognize(e, in);
    REQUIRE(res.accepted);
    std::vector<std::string> out;
    for (const auto& t : extract_trees(e, in, res.state.bsrs(), std::nullopt, g.filters())) out.push_back(render_tree(*t));
    return out;
  };
  CHECK(trees_of("1+2*3") ==
        std::vector<std::string>{"(Exp 0 5 (Exp 0 1 '1'@0) '+'@1 (Exp 2 5 (Exp 2 3 '2'@2) '*'@3 (Exp 4 5 '3'@4)))"});
  CHECK(trees_of("2^3^4") ==
        std::vector<std::string>{"(Exp 0 5 (Exp 0 1 '2'@0) '^'@1 (Exp 2 5 (Exp 2 3 '3'@2) '^'@3 (Exp 4 5 '4'@4)))"});
  CHECK(trees_of("1-2-3") ==
        std::vector<std::string>{"(Exp 0 5 (Exp 0 3 (Exp 0 1 '1'@0) '-'@1 (Exp 2 3 '2'@2)) '-'@3 (Exp 4 5 '3'@4))"});
  CHECK(trees_of("(1+2)*3").size() == 1);
  CHECK(trees_of("1*2+3*4-5/6^7").size() == 1);
  CHECK(elaborate(parse_grammar(corpus("expr.g"))).filters().empty());
}
