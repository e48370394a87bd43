#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

#include "gll/grammar_dsl.hpp"
#include "gll/slot.hpp"
#include "gll/token.hpp"

// Backtracking continuation-passing recognizers, built straight from the
// grammar AST.  No memoization and no left-recursion handling: these exist to
// be obviously correct, and serve as a reference for the engine.
namespace gll::naive {

using Continuation = std::function<bool(Index)>;
using Recognizer = std::function<bool(std::span<const Token>, Index, const Continuation&)>;

// c(k + 1) when input[k] exists and matches; false otherwise.
Recognizer naive_token(TokenPattern pattern);
// Each recognizer continues with the next; the empty sequence succeeds in place.
Recognizer naive_seq(std::vector<Recognizer> parts);
// Succeeds if any alternative does.
Recognizer naive_alt(std::vector<Recognizer> alternatives);

// True iff r derives the whole input from position 0.
bool naive_run(const Recognizer& r, std::span<const Token> input);

class StepBudgetExceeded : public std::runtime_error {
 public:
  explicit StepBudgetExceeded(std::uint64_t budget);
};

class NaiveGrammar {
 public:
  // The AST must be valid.  With a step budget every recognizer invocation
  // counts one step and the run throws StepBudgetExceeded past the budget;
  // left-recursive grammars otherwise recurse until the stack runs out.
  NaiveGrammar(const dsl::GrammarAst& ast, dsl::TokenMode mode = dsl::TokenMode::chars,
               std::optional<std::uint64_t> step_budget = std::nullopt);

  Recognizer recognizer(const dsl::SymbolRef& start) const;
  Recognizer recognizer(std::string_view start) const { return recognizer(dsl::parse_symbol_ref(start)); }

  // Resets the step counter, then runs.
  bool recognize(const dsl::SymbolRef& start, std::span<const Token> input) const;
  bool recognize(std::string_view start, std::span<const Token> input) const {
    return recognize(dsl::parse_symbol_ref(start), input);
  }

  std::uint64_t steps() const noexcept { return counter_->steps; }

 private:
  struct Counter {
    std::uint64_t steps = 0;
    std::optional<std::uint64_t> budget;
  };

  std::shared_ptr<const dsl::GrammarAst> ast_;
  dsl::TokenMode mode_;
  std::shared_ptr<Counter> counter_;
};

}  // namespace gll::naive
