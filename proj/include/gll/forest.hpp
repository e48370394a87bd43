#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "gll/parse_state.hpp"
#include "gll/symbol.hpp"

namespace gll {

// Nonterminals being evaluated at the current extent pair, kept sorted.
using VisitedSet = std::vector<SymbolId>;

struct AlternateRef {
  SymbolId lhs;
  std::size_t index;
  std::span<const Symbol> symbols;
};

// Pivot vectors (p_1 = l, p_2, ..., p_n, r) of an alternate over (l, r);
// symbol i spans [p_i, p_{i+1}).  The epsilon alternate yields one empty
// vector when its element (x ::= ., l, l, l) is present.  Ordered as the
// right-to-left pivot walk produces them: the last pivot varies slowest.
std::vector<std::vector<Index>> enumerate_splits(SymbolId lhs, std::span<const SymbolId> alternate, Index l, Index r,
                                                 const BsrSet& bsrs);
// Same, over the alternate's compiled points.
std::vector<std::vector<Index>> enumerate_splits(std::span<const ContinuationPoint> points, Index l, Index r,
                                                 const BsrSet& bsrs);

// [input[l]] when r = l + 1 and the pattern accepts it.
std::vector<Token> evaluate_token(const TokenPattern& pattern, std::span<const Token> input, Index l, Index r);

// ---------------------------------------------------------------- filters

struct ChildSummary {
  SymbolId symbol;
  Index left;
  Index right;
  // Alternate at the root of the child's derivation; empty for tokens.
  std::optional<std::size_t> alternate;
  std::span<const Symbol> alternate_symbols;
};

struct SplitCandidate {
  SymbolId lhs;
  std::size_t alternate;
  std::span<const Symbol> symbols;
  std::vector<Index> pivots;  // l, p_2, ..., r
  std::vector<ChildSummary> children;
};

struct Filter {
  std::string name;
  std::function<bool(const SplitCandidate&)> keep;
};

std::vector<SplitCandidate> apply_filters(std::span<const Filter> filters, std::vector<SplitCandidate> candidates);
bool passes(std::span<const Filter> filters, const SplitCandidate& c);

enum class Assoc : std::uint8_t { left, right, nonassoc };

// Operator precedence levels; later levels bind tighter.
class PrecedenceTable {
 public:
  struct Entry {
    int level;
    Assoc assoc;
  };

  void add_level(Assoc assoc, const std::vector<SymbolId>& tokens);
  std::optional<Entry> lookup(SymbolId token) const;
  // The rightmost token of the alternate that has a declared precedence.
  std::optional<SymbolId> operator_of(std::span<const Symbol> alternate) const;
  bool empty() const noexcept { return table_.empty(); }

 private:
  std::map<SymbolId, Entry> table_;
  int levels_ = 0;
};

// Rejects a split when its leftmost or rightmost child is rooted in an
// operator alternate that binds looser than the parent's operator, or equally
// tight on the side the associativity forbids.
Filter precedence_filter(PrecedenceTable table);

// ---------------------------------------------------------------- evaluation

template <typename V>
struct Semantics {
  std::function<V(SymbolId token, const Token& value, Index pos)> token;
  std::function<V(const AlternateRef&, std::span<const Index> pivots, std::span<const V> children)> action;
  // Optional: sees every child's value list for one split and returns the
  // values for that split.  Replaces `action` when set.
  std::function<std::vector<V>(const AlternateRef&, std::span<const Index> pivots,
                               std::span<const std::vector<V>> children)>
      ambiguous;
};

struct EvalOptions {
  // Maximum number of values returned; also caps every intermediate list.
  std::size_t limit = std::numeric_limits<std::size_t>::max();
  std::span<const Filter> filters;
};

namespace detail {

inline bool visited_contains(const VisitedSet& v, SymbolId id) {
  return std::binary_search(v.begin(), v.end(), id, [](SymbolId a, SymbolId b) { return a.node() < b.node(); });
}

inline VisitedSet visited_with(const VisitedSet& v, SymbolId id) {
  VisitedSet out = v;
  auto less = [](SymbolId a, SymbolId b) { return a.node() < b.node(); };
  out.insert(std::upper_bound(out.begin(), out.end(), id, less), id);
  return out;
}

struct MemoKey {
  const void* symbol;
  Index left;
  Index right;
  std::vector<const void*> visited;
  friend auto operator<=>(const MemoKey&, const MemoKey&) = default;
};

inline MemoKey memo_key(const SymbolImpl& s, Index l, Index r, const VisitedSet& v) {
  MemoKey k{&s, l, r, {}};
  k.visited.reserve(v.size());
  for (SymbolId id : v) k.visited.push_back(id.node());
  return k;
}

// Values of one child position, with the root alternate each came from.
template <typename V>
struct ChildValues {
  std::vector<V> values;
  std::vector<std::uint32_t> group;  // index into groups
  std::vector<std::optional<std::size_t>> groups;
};

template <typename V>
class Evaluator {
 public:
  using Grouped = std::vector<std::pair<std::size_t, std::vector<V>>>;

  Evaluator(std::span<const Token> input, const BsrSet& bsrs, const Semantics<V>& sem, const EvalOptions& opts)
      : input_(input), bsrs_(bsrs), sem_(sem), opts_(opts) {}

  std::vector<V> run(const Symbol& s, Index l, Index r, const VisitedSet& visited) {
    const SymbolImpl& impl = s.resolve();
    std::vector<V> out;
    if (impl.kind == SymbolImpl::Kind::token) {
      for (auto& t : evaluate_token(*impl.pattern, input_, l, r)) out.push_back(sem_.token(impl.id, t, l));
      return out;
    }
    for (auto& [alt, vals] : nonterminal(impl, l, r, visited))
      for (const V& v : vals) {
        if (out.size() >= opts_.limit) return out;
        out.push_back(v);
      }
    return out;
  }

 private:
  const Grouped& nonterminal(const SymbolImpl& s, Index l, Index r, const VisitedSet& visited) {
    static const Grouped none;
    if (visited_contains(visited, s.id)) return none;
    MemoKey key = memo_key(s, l, r, visited);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    Grouped result;
    for (std::size_t a = 0; a < s.alternates.size(); ++a) {
      const CompiledAlternate& alt = s.alternates[a];
      AlternateRef ref{s.id, a, alt.symbols};
      std::vector<V> vals;
      for (const auto& split : enumerate_splits(alt.points, l, r, bsrs_)) {
        if (vals.size() >= opts_.limit) break;
        std::vector<Index> piv = full_pivots(split, l, r);
        expand(s, ref, piv, l, r, visited, vals);
      }
      if (!vals.empty()) result.emplace_back(a, std::move(vals));
    }
    return memo_.emplace(std::move(key), std::move(result)).first->second;
  }

  static std::vector<Index> full_pivots(const std::vector<Index>& split, Index l, Index r) {
    if (split.empty()) return {l, r};
    return split;
  }

  void expand(const SymbolImpl& s, const AlternateRef& ref, const std::vector<Index>& piv, Index l, Index r,
              const VisitedSet& visited, std::vector<V>& out) {
    const std::size_t n = ref.symbols.size();
    std::vector<ChildValues<V>> children(n);
    for (std::size_t j = 0; j < n; ++j) {
      const Index cl = piv[j], cr = piv[j + 1];
      const SymbolImpl& child = ref.symbols[j].resolve();
      ChildValues<V>& cv = children[j];
      if (child.kind == SymbolImpl::Kind::token) {
        cv.groups.push_back(std::nullopt);
        for (auto& t : evaluate_token(*child.pattern, input_, cl, cr)) {
          cv.values.push_back(sem_.token(child.id, t, cl));
          cv.group.push_back(0);
        }
      } else {
        VisitedSet cvis = (cl == l && cr == r) ? visited_with(visited, s.id) : VisitedSet{};
        for (auto& [alt, vals] : nonterminal(child, cl, cr, cvis)) {
          auto g = static_cast<std::uint32_t>(cv.groups.size());
          cv.groups.push_back(alt);
          for (const V& v : vals) {
            cv.values.push_back(v);
            cv.group.push_back(g);
          }
        }
      }
      if (cv.values.empty()) return;
    }

    // which combinations of child root alternates survive the filters
    std::map<std::vector<std::uint32_t>, bool> allowed;
    auto combo_ok = [&](const std::vector<std::uint32_t>& combo) {
      if (opts_.filters.empty()) return true;
      auto [it, fresh] = allowed.try_emplace(combo, false);
      if (fresh) it->second = passes(opts_.filters, candidate(ref, piv, children, combo));
      return it->second;
    };

    if (sem_.ambiguous) {
      std::vector<std::uint32_t> combo(n, 0);
      // one call per allowed combination of child groups
      for (;;) {
        if (combo_ok(combo)) {
          std::vector<std::vector<V>> lists(n);
          for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < children[j].values.size(); ++i)
              if (children[j].group[i] == combo[j]) lists[j].push_back(children[j].values[i]);
          for (V& v : sem_.ambiguous(ref, piv, lists)) {
            if (out.size() >= opts_.limit) return;
            out.push_back(std::move(v));
          }
        }
        std::size_t j = 0;
        while (j < n && ++combo[j] == children[j].groups.size()) combo[j++] = 0;
        if (j == n) break;
      }
      return;
    }

    // odometer over child values, first child fastest
    std::vector<std::size_t> idx(n, 0);
    std::vector<std::uint32_t> combo(n, 0);
    std::vector<V> args;
    for (;;) {
      for (std::size_t j = 0; j < n; ++j) combo[j] = children[j].group[idx[j]];
      if (combo_ok(combo)) {
        if (out.size() >= opts_.limit) return;
        args.clear();
        for (std::size_t j = 0; j < n; ++j) args.push_back(children[j].values[idx[j]]);
        out.push_back(sem_.action(ref, piv, args));
      }
      std::size_t j = 0;
      while (j < n && ++idx[j] == children[j].values.size()) idx[j++] = 0;
      if (j == n) break;
    }
  }

  SplitCandidate candidate(const AlternateRef& ref, const std::vector<Index>& piv,
                           const std::vector<ChildValues<V>>& children, const std::vector<std::uint32_t>& combo) {
    SplitCandidate c{ref.lhs, ref.index, ref.symbols, piv, {}};
    for (std::size_t j = 0; j < ref.symbols.size(); ++j) {
      ChildSummary sum{ref.symbols[j].id(), piv[j], piv[j + 1], children[j].groups[combo[j]], {}};
      if (sum.alternate) sum.alternate_symbols = ref.symbols[j].alternate(*sum.alternate);
      c.children.push_back(sum);
    }
    return c;
  }

  std::span<const Token> input_;
  const BsrSet& bsrs_;
  const Semantics<V>& sem_;
  const EvalOptions& opts_;
  std::map<MemoKey, Grouped> memo_;
};

}  // namespace detail

// Every (curtailed) derivation of input[l..r) rooted at s, mapped through
// the semantics.  Alternates contribute in definition order.
template <typename V>
std::vector<V> evaluate(const Symbol& s, std::span<const Token> input, const BsrSet& bsrs, Index l, Index r,
                        const Semantics<V>& sem, const EvalOptions& opts = {}, const VisitedSet& visited = {}) {
  detail::Evaluator<V> ev(input, bsrs, sem, opts);
  return ev.run(s, l, r, visited);
}

// ---------------------------------------------------------------- counting

struct DerivationCount {
  std::uint64_t value = 0;
  bool saturated = false;
};

DerivationCount count_derivations(const Symbol& s, std::span<const Token> input, const BsrSet& bsrs, Index l, Index r,
                                  std::span<const Filter> filters = {});

// ---------------------------------------------------------------- trees

struct DerivationTree {
  SymbolId symbol;
  Index left = 0;
  Index right = 0;
  std::optional<Token> token;  // set on leaves
  std::size_t alternate = 0;
  std::vector<std::shared_ptr<const DerivationTree>> children;
};
using TreePtr = std::shared_ptr<const DerivationTree>;

std::vector<TreePtr> extract_trees(const Symbol& s, std::span<const Token> input, const BsrSet& bsrs,
                                   std::optional<std::size_t> limit = std::nullopt,
                                   std::span<const Filter> filters = {});

// "(Name l r child...)" with token leaves as 'c'@pos.
std::string render_tree(const DerivationTree& t);

// ---------------------------------------------------------------- errors

struct ErrorReport {
  Index position = 0;
  std::vector<std::string> expected;  // rendered slots
  std::optional<SymbolId> expected_symbol;
  std::optional<Token> got;
};

struct ErrorExtraction {
  bool accepted = false;  // set when the run accepted; reports stay empty
  std::vector<ErrorReport> reports;
};

// Up to n reports at the furthest failure position, one per attempted slot,
// ordered by rendered slot.
ErrorExtraction extract_errors(const ParseState& state, bool accepted, std::size_t n = 3);

}  // namespace gll
