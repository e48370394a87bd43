#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "gll/engine.hpp"
#include "gll/symbol.hpp"

namespace testing_support {

using namespace gll;

// E ::= E E E | 'a' | epsilon
inline Symbol e_grammar(Grammar& g) {
  Symbol a = g.literal('a');
  Symbol e = g.lazy("E");
  return g.nonterminal("E", {{e, e, e}, {a}, {}});
}

// CSV(v): CSV(v) ',' CSV(v) | v
inline Symbol csv_grammar(Grammar& g, Symbol v) {
  g.define("CSV", 1, [](Grammar& g, std::span<const Symbol> a) -> std::vector<Grammar::Alternate> {
    Symbol self = g.lazy("CSV", a);
    return {{self, g.literal(','), self}, {a[0]}};
  });
  return g.apply("CSV", {v});
}

// Expr ::= Expr '+' Expr | 'a'
inline Symbol expr_grammar(Grammar& g) {
  Symbol e = g.lazy("Expr");
  return g.nonterminal("Expr", {{e, g.literal('+'), e}, {g.literal('a')}});
}

inline std::vector<Token> chars(std::string_view s) { return char_tokens(s); }

inline std::set<std::string> rendered_descriptors(const ParseState& st) {
  std::set<std::string> out;
  for (const auto& d : st.uset().sorted()) out.insert(render_descriptor(d));
  return out;
}

inline std::set<std::string> rendered_bsrs(const ParseState& st) {
  std::set<std::string> out;
  for (const auto& b : st.bsrs().sorted()) out.insert(render_bsr(b));
  return out;
}

inline std::vector<std::string> golden_descriptors() {
  return {
      "E ::= . E E E, 0, 0", "E ::= . 'a', 0, 0",   "E ::= ., 0, 0",       "E ::= 'a' ., 0, 1",
      "E ::= E . E E, 0, 0", "E ::= E . E E, 0, 1", "E ::= E E . E, 0, 0", "E ::= E E . E, 0, 1",
      "E ::= . E E E, 1, 1", "E ::= . 'a', 1, 1",   "E ::= ., 1, 1",       "E ::= E E E ., 0, 0",
      "E ::= E E E ., 0, 1", "E ::= E . E E, 1, 1", "E ::= E E . E, 1, 1", "E ::= E E E ., 1, 1",
  };
}

inline std::vector<std::string> golden_bsrs() {
  return {
      "E ::= ., 0, 0, 0",       "E ::= E . E E, 0, 0, 0", "E ::= E E . E, 0, 0, 0", "E ::= E E E ., 0, 0, 0",
      "E ::= 'a' ., 0, 0, 1",   "E ::= E . E E, 0, 0, 1", "E ::= E E . E, 0, 0, 1", "E ::= E E . E, 0, 1, 1",
      "E ::= E E E ., 0, 0, 1", "E ::= E E E ., 0, 1, 1", "E ::= ., 1, 1, 1",       "E ::= E . E E, 1, 1, 1",
      "E ::= E E . E, 1, 1, 1", "E ::= E E E ., 1, 1, 1",
  };
}

template <typename C>
std::set<std::string> as_set(const C& c) {
  return std::set<std::string>(c.begin(), c.end());
}

}  // namespace testing_support
