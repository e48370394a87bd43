#include "gll/engine.hpp"

#include <algorithm>
#include <memory>

namespace gll {

using detail::SymbolImpl;

namespace {

void process(ParseRun& run, const ContinuationPoint& point, Index left, Index right) {
  if (!point.next) {
    ascend(run, {point.slot.lhs(), left}, right);
    return;
  }
  run.match(*point.next, right, Continuation(*(&point + 1), left));
}

}  // namespace

void ParseRun::match(const Symbol& s, Index left, const Continuation& k) {
  bool fresh = false;
  const SymbolImpl& impl = s.resolve(&fresh);
  if (fresh) state_.charge_instantiation();
  match(impl, left, k);
}

void ParseRun::match(const SymbolImpl& s, Index left, const Continuation& k) {
  if (s.kind == SymbolImpl::Kind::token) {
    if (left < state_.length() && s.pattern->accepts(state_.input()[left])) {
      schedule(k, left, left + 1);
      return;
    }
    const FailureInfo& f = state_.stats().furthest_failure;
    const Slot& after = k.slot();
    if ((!f.position || *f.position <= left) && !after.at_start())
      state_.note_failure(Slot::at(after.lhs(), after.rhs(), after.dot() - 1), left);
    return;
  }
  descend(*this, {s.id, left}, k, [&] {
    const auto& alts = s.alternates;
    auto start = [&](const detail::CompiledAlternate& a) { schedule(Continuation(a.points.front(), left), left, left); };
    if (options_.reverse_alternates)
      std::for_each(alts.rbegin(), alts.rend(), start);
    else
      std::for_each(alts.begin(), alts.end(), start);
  });
}

void ParseRun::drain() {
  while (!queue_.empty()) {
    Task t;
    if (options_.schedule == Schedule::fifo) {
      t = queue_.front();
      queue_.pop_front();
    } else {
      t = queue_.back();
      queue_.pop_back();
    }
    ++state_.stats().continuations_applied;
    apply_continuation(*this, Continuation(*t.point, t.left), t.pivot, t.right);
  }
}

void ascend(ParseRun& run, const Commencement& c, Index r) {
  run.state().add_extent(c, r);
  auto conts = run.state().continuations_for(c);
  if (run.options().reverse_alternates) {
    for (auto it = conts.rbegin(); it != conts.rend(); ++it) run.schedule(*it, c.left, r);
  } else {
    for (const Continuation& k : conts) run.schedule(k, c.left, r);
  }
}

void apply_continuation(ParseRun& run, const Continuation& k, Index pivot, Index right) {
  const ContinuationPoint& p = k.point();
  switch (p.role) {
    case ContinuationPoint::Role::start:
      return;
    case ContinuationPoint::Role::probe:
      if (p.probe) p.probe(run, pivot, right, k.left());
      return;
    case ContinuationPoint::Role::chain:
      continue_with(run, {p.slot, k.left(), pivot, right}, [&] { process(run, p, k.left(), right); });
      return;
  }
}

namespace {

ParseResult run_impl(const Symbol& s, std::vector<Token> input, ParseOptions options) {
  ParseRun run(std::move(input), options);
  bool fresh = false;
  const SymbolImpl* root = &s.resolve(&fresh);
  if (fresh) run.state().charge_instantiation();
  if (root->kind == SymbolImpl::Kind::token) {
    std::shared_ptr<const SymbolImpl> wrapper =
        Grammar::make_nonterminal(SymbolId::applied(start_name), {Grammar::Alternate{s}});
    root = wrapper.get();
    run.state().retain(wrapper);
  }
  const SymbolId root_id = root->id;
  auto start = std::make_shared<ContinuationPoint>(
      ContinuationPoint{Slot::make(SymbolId::applied(start_name), {root_id}, {}), ContinuationPoint::Role::start, nullptr, {}});
  run.state().retain(start);

  run.match(*root, 0, Continuation(*start, 0));
  run.drain();

  ParseResult result{false, {}, std::move(run).take_state()};
  auto ext = result.state.extents_for({root_id, 0});
  result.extents.assign(ext.begin(), ext.end());
  result.accepted = std::binary_search(ext.begin(), ext.end(), result.state.length());
  return result;
}

}  // namespace

ParseResult run_recognize(const Symbol& s, std::vector<Token> input, ParseOptions options) {
  return run_impl(s, std::move(input), options);
}

ParseResult run_prefix(const Symbol& s, std::vector<Token> input, ParseOptions options) {
  return run_impl(s, std::move(input), options);
}

}  // namespace gll
