#include "gll/naive.hpp"

#include <limits>
#include <string>

namespace gll::naive {

Recognizer naive_token(TokenPattern pattern) {
  return [p = std::move(pattern)](std::span<const Token> in, Index k, const Continuation& c) {
    return k < in.size() && p.accepts(in[k]) && c(k + 1);
  };
}

namespace {

bool seq_from(const std::vector<Recognizer>& parts, std::size_t i, std::span<const Token> in, Index k,
              const Continuation& c) {
  if (i == parts.size()) return c(k);
  return parts[i](in, k, [&](Index k2) { return seq_from(parts, i + 1, in, k2, c); });
}

}  // namespace

Recognizer naive_seq(std::vector<Recognizer> parts) {
  return [ps = std::move(parts)](std::span<const Token> in, Index k, const Continuation& c) {
    return seq_from(ps, 0, in, k, c);
  };
}

Recognizer naive_alt(std::vector<Recognizer> alternatives) {
  return [as = std::move(alternatives)](std::span<const Token> in, Index k, const Continuation& c) {
    for (const auto& a : as)
      if (a(in, k, c)) return true;
    return false;
  };
}

bool naive_run(const Recognizer& r, std::span<const Token> input) {
  return r(input, 0, [n = input.size()](Index k) { return k == n; });
}

StepBudgetExceeded::StepBudgetExceeded(std::uint64_t budget)
    : std::runtime_error("naive recognizer exceeded its step budget of " + std::to_string(budget)) {}

namespace {

struct Builder {
  std::shared_ptr<const dsl::GrammarAst> ast;
  dsl::TokenMode mode;
  std::shared_ptr<void> counter_owner;
  std::uint64_t* steps;
  std::optional<std::uint64_t> budget;

  Recognizer counted(Recognizer r) const {
    return [r = std::move(r), owner = counter_owner, steps = steps, budget = budget](
               std::span<const Token> in, Index k, const Continuation& c) {
      if (++*steps > budget.value_or(std::numeric_limits<std::uint64_t>::max())) throw StepBudgetExceeded(*budget);
      return r(in, k, c);
    };
  }

  TokenPattern declared(const dsl::TokenDecl& d) const {
    if (mode == dsl::TokenMode::words) return TokenPattern::exact(d.name, d.name);
    return TokenPattern::char_class(d.name, [spec = d.pattern](char ch) { return spec.accepts(ch); });
  }

  // formals bound to recognizers
  struct Scope {
    const std::vector<std::string>* names = nullptr;
    std::shared_ptr<const std::vector<Recognizer>> values;
  };

  Recognizer build(const dsl::SymbolRef& r, const Scope& scope) const {
    if (r.kind == dsl::SymbolRef::Kind::literal) return counted(naive_token(TokenPattern::literal(r.ch)));
    if (scope.names)
      for (std::size_t i = 0; i < scope.names->size(); ++i)
        if ((*scope.names)[i] == r.name) return (*scope.values)[i];
    if (const dsl::TokenDecl* t = ast->find_token(r.name)) return counted(naive_token(declared(*t)));
    const dsl::Definition* def = ast->find_definition(r.name);
    if (!def) throw std::invalid_argument("undefined name " + r.name);
    if (def->params.size() != r.args.size())
      throw std::invalid_argument(r.name + " expects " + std::to_string(def->params.size()) + " argument(s)");
    auto args = std::make_shared<std::vector<Recognizer>>();
    for (const auto& a : r.args) args->push_back(build(a, scope));
    // alternates are built on each call, so recursive definitions stay finite
    auto self = std::make_shared<const Builder>(*this);
    return counted([self, def, args](std::span<const Token> in, Index k, const Continuation& c) {
      Scope inner{&def->params, args};
      for (const auto& alt : def->alternates) {
        std::vector<Recognizer> parts;
        for (const auto& sym : alt) parts.push_back(self->build(sym, inner));
        if (naive_seq(std::move(parts))(in, k, c)) return true;
      }
      return false;
    });
  }
};

}  // namespace

NaiveGrammar::NaiveGrammar(const dsl::GrammarAst& ast, dsl::TokenMode mode, std::optional<std::uint64_t> step_budget)
    : ast_(std::make_shared<const dsl::GrammarAst>(ast)), mode_(mode), counter_(std::make_shared<Counter>()) {
  counter_->budget = step_budget;
}

Recognizer NaiveGrammar::recognizer(const dsl::SymbolRef& start) const {
  Builder b{ast_, mode_, counter_, &counter_->steps, counter_->budget};
  return b.build(start, {});
}

bool NaiveGrammar::recognize(const dsl::SymbolRef& start, std::span<const Token> input) const {
  counter_->steps = 0;
  return naive_run(recognizer(start), input);
}

}  // namespace gll::naive
