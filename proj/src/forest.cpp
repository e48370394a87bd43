#include "gll/forest.hpp"


namespace gll {

using detail::SymbolImpl;

namespace {

void walk(std::span<const ContinuationPoint> points, const BsrSet& bsrs, Index l, std::size_t j, Index right,
          std::vector<Index>& cur, std::vector<std::vector<Index>>& out) {
  for (Index k : bsrs.pivots(points[j].slot, l, right)) {
    if (j == 1) {
      if (k != l) continue;
      cur[0] = k;
      out.push_back(cur);
    } else {
      cur[j - 1] = k;
      walk(points, bsrs, l, j - 1, k, cur, out);
    }
  }
}

}  // namespace

std::vector<std::vector<Index>> enumerate_splits(std::span<const ContinuationPoint> points, Index l, Index r,
                                                 const BsrSet& bsrs) {
  std::vector<std::vector<Index>> out;
  const std::size_t n = points.size() - 1;
  if (n == 0) {
    if (l == r && bsrs.contains({points[0].slot, l, l, r})) out.emplace_back();
    return out;
  }
  std::vector<Index> cur(n + 1);
  cur[n] = r;
  walk(points, bsrs, l, n, r, cur, out);
  return out;
}

std::vector<std::vector<Index>> enumerate_splits(SymbolId lhs, std::span<const SymbolId> alternate, Index l, Index r,
                                                 const BsrSet& bsrs) {
  std::vector<ContinuationPoint> points;
  for (std::size_t j = 0; j <= alternate.size(); ++j) points.push_back({Slot::at(lhs, alternate, j), ContinuationPoint::Role::chain, nullptr, {}});
  return enumerate_splits(points, l, r, bsrs);
}

std::vector<Token> evaluate_token(const TokenPattern& pattern, std::span<const Token> input, Index l, Index r) {
  if (r != l + 1 || l >= input.size()) return {};
  if (auto v = pattern.classify(input[l])) return {*v};
  return {};
}

bool passes(std::span<const Filter> filters, const SplitCandidate& c) {
  return std::all_of(filters.begin(), filters.end(), [&](const Filter& f) { return f.keep(c); });
}

std::vector<SplitCandidate> apply_filters(std::span<const Filter> filters, std::vector<SplitCandidate> candidates) {
  std::erase_if(candidates, [&](const SplitCandidate& c) { return !passes(filters, c); });
  return candidates;
}

void PrecedenceTable::add_level(Assoc assoc, const std::vector<SymbolId>& tokens) {
  ++levels_;
  for (SymbolId t : tokens) table_[t] = {levels_, assoc};
}

std::optional<PrecedenceTable::Entry> PrecedenceTable::lookup(SymbolId token) const {
  auto it = table_.find(token);
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

std::optional<SymbolId> PrecedenceTable::operator_of(std::span<const Symbol> alternate) const {
  for (auto it = alternate.rbegin(); it != alternate.rend(); ++it)
    if (it->is_token() && table_.contains(it->id())) return it->id();
  return std::nullopt;
}

Filter precedence_filter(PrecedenceTable table) {
  return Filter{"precedence", [t = std::move(table)](const SplitCandidate& c) {
                  if (c.symbols.size() < 2 || c.children.size() != c.symbols.size()) return true;
                  auto op = t.operator_of(c.symbols);
                  if (!op) return true;
                  const auto parent = *t.lookup(*op);
                  auto child_ok = [&](const ChildSummary& ch, Assoc allowed) {
                    if (!ch.alternate) return true;
                    auto cop = t.operator_of(ch.alternate_symbols);
                    if (!cop) return true;
                    const auto child = *t.lookup(*cop);
                    if (child.level < parent.level) return false;
                    if (child.level == parent.level && parent.assoc != allowed) return false;
                    return true;
                  };
                  return child_ok(c.children.front(), Assoc::left) && child_ok(c.children.back(), Assoc::right);
                }};
}

// ---------------------------------------------------------------- counting

namespace {

void sat_add(DerivationCount& acc, DerivationCount x) {
  acc.saturated |= x.saturated;
  if (acc.value > std::numeric_limits<std::uint64_t>::max() - x.value) {
    acc.value = std::numeric_limits<std::uint64_t>::max();
    acc.saturated = true;
  } else {
    acc.value += x.value;
  }
}

DerivationCount sat_mul(DerivationCount a, DerivationCount b) {
  DerivationCount out{0, a.saturated || b.saturated};
  if (a.value != 0 && b.value > std::numeric_limits<std::uint64_t>::max() / a.value) {
    out.value = std::numeric_limits<std::uint64_t>::max();
    out.saturated = true;
  } else {
    out.value = a.value * b.value;
  }
  return out;
}

class Counter {
 public:
  using Grouped = std::vector<std::pair<std::size_t, DerivationCount>>;

  Counter(std::span<const Token> input, const BsrSet& bsrs, std::span<const Filter> filters)
      : input_(input), bsrs_(bsrs), filters_(filters) {}

  DerivationCount run(const Symbol& s, Index l, Index r) {
    const SymbolImpl& impl = s.resolve();
    DerivationCount total;
    if (impl.kind == SymbolImpl::Kind::token) {
      total.value = evaluate_token(*impl.pattern, input_, l, r).size();
      return total;
    }
    for (auto& [alt, c] : nonterminal(impl, l, r, {})) sat_add(total, c);
    return total;
  }

 private:
  const Grouped& nonterminal(const SymbolImpl& s, Index l, Index r, const VisitedSet& visited) {
    static const Grouped none;
    if (detail::visited_contains(visited, s.id)) return none;
    auto key = detail::memo_key(s, l, r, visited);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Grouped result;
    for (std::size_t a = 0; a < s.alternates.size(); ++a) {
      const detail::CompiledAlternate& alt = s.alternates[a];
      DerivationCount total;
      for (const auto& split : enumerate_splits(alt.points, l, r, bsrs_)) {
        std::vector<Index> piv = split.empty() ? std::vector<Index>{l, r} : split;
        sat_add(total, for_split(s, a, alt, piv, l, r, visited));
      }
      if (total.value != 0 || total.saturated) result.emplace_back(a, total);
    }
    return memo_.emplace(std::move(key), std::move(result)).first->second;
  }

  DerivationCount for_split(const SymbolImpl& s, std::size_t a, const detail::CompiledAlternate& alt,
                            const std::vector<Index>& piv, Index l, Index r, const VisitedSet& visited) {
    const std::size_t n = alt.symbols.size();
    std::vector<Grouped> children(n);
    for (std::size_t j = 0; j < n; ++j) {
      const Index cl = piv[j], cr = piv[j + 1];
      const SymbolImpl& child = alt.symbols[j].resolve();
      if (child.kind == SymbolImpl::Kind::token) {
        auto v = evaluate_token(*child.pattern, input_, cl, cr).size();
        if (v) children[j].emplace_back(std::numeric_limits<std::size_t>::max(), DerivationCount{v, false});
      } else {
        VisitedSet cvis = (cl == l && cr == r) ? detail::visited_with(visited, s.id) : VisitedSet{};
        children[j] = nonterminal(child, cl, cr, cvis);
      }
      if (children[j].empty()) return {};
    }
    if (filters_.empty()) {
      DerivationCount prod{1, false};
      for (const auto& g : children) {
        DerivationCount sum;
        for (auto& [_, c] : g) sat_add(sum, c);
        prod = sat_mul(prod, sum);
      }
      return prod;
    }
    DerivationCount total;
    std::vector<std::size_t> combo(n, 0);
    for (;;) {
      SplitCandidate cand{s.id, a, alt.symbols, piv, {}};
      DerivationCount prod{1, false};
      for (std::size_t j = 0; j < n; ++j) {
        auto [alt_index, c] = children[j][combo[j]];
        ChildSummary sum{alt.symbols[j].id(), piv[j], piv[j + 1], std::nullopt, {}};
        if (alt_index != std::numeric_limits<std::size_t>::max()) {
          sum.alternate = alt_index;
          sum.alternate_symbols = alt.symbols[j].alternate(alt_index);
        }
        cand.children.push_back(sum);
        prod = sat_mul(prod, c);
      }
      if (passes(filters_, cand)) sat_add(total, prod);
      std::size_t j = 0;
      while (j < n && ++combo[j] == children[j].size()) combo[j++] = 0;
      if (j == n) break;
    }
    return total;
  }

  std::span<const Token> input_;
  const BsrSet& bsrs_;
  std::span<const Filter> filters_;
  std::map<detail::MemoKey, Grouped> memo_;
};

}  // namespace

DerivationCount count_derivations(const Symbol& s, std::span<const Token> input, const BsrSet& bsrs, Index l, Index r,
                                  std::span<const Filter> filters) {
  Counter c(input, bsrs, filters);
  return c.run(s, l, r);
}

// ---------------------------------------------------------------- trees

std::vector<TreePtr> extract_trees(const Symbol& s, std::span<const Token> input, const BsrSet& bsrs,
                                   std::optional<std::size_t> limit, std::span<const Filter> filters) {
  Semantics<TreePtr> sem;
  sem.token = [](SymbolId id, const Token& t, Index pos) {
    return std::make_shared<const DerivationTree>(DerivationTree{id, pos, pos + 1, t, 0, {}});
  };
  sem.action = [](const AlternateRef& ref, std::span<const Index> piv, std::span<const TreePtr> kids) {
    return std::make_shared<const DerivationTree>(DerivationTree{
        ref.lhs, piv.front(), piv.back(), std::nullopt, ref.index, {kids.begin(), kids.end()}});
  };
  EvalOptions opts;
  if (limit) opts.limit = *limit;
  opts.filters = filters;
  return evaluate(s, input, bsrs, 0, static_cast<Index>(input.size()), sem, opts);
}

namespace {

void render_into(const DerivationTree& t, std::string& out) {
  if (t.token) {
    out += '\'' + *t.token + "'@" + std::to_string(t.left);
    return;
  }
  out += '(' + t.symbol.str() + ' ' + std::to_string(t.left) + ' ' + std::to_string(t.right);
  for (const auto& c : t.children) {
    out += ' ';
    render_into(*c, out);
  }
  out += ')';
}

}  // namespace

std::string render_tree(const DerivationTree& t) {
  std::string out;
  render_into(t, out);
  return out;
}

// ---------------------------------------------------------------- errors

ErrorExtraction extract_errors(const ParseState& state, bool accepted, std::size_t n) {
  ErrorExtraction out;
  if (accepted) {
    out.accepted = true;
    return out;
  }
  const FailureInfo& f = state.stats().furthest_failure;
  if (!f.position) return out;
  for (const Slot& s : f.slots) {
    ErrorReport rep;
    rep.position = *f.position;
    rep.expected.push_back(render_slot(s));
    if (!s.at_end()) rep.expected_symbol = s.post().front();
    rep.got = f.got;
    out.reports.push_back(std::move(rep));
  }
  std::sort(out.reports.begin(), out.reports.end(),
            [](const ErrorReport& a, const ErrorReport& b) { return a.expected < b.expected; });
  if (out.reports.size() > n) out.reports.resize(n);
  return out;
}

}  // namespace gll
