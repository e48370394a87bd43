#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "gll/continuation.hpp"
#include "gll/parse_state.hpp"
#include "gll/symbol.hpp"

namespace gll {

enum class Schedule : std::uint8_t { fifo, lifo };

struct ParseOptions {
  Schedule schedule = Schedule::fifo;
  // Apply alternates and registered continuations in reverse order.
  bool reverse_alternates = false;
  // Processed-descriptor budget; unlimited when empty.
  std::optional<std::uint64_t> fuel;
  // Cap on nonterminals first instantiated during this run.  Each
  // instantiation of a parameterized definition costs far more memory than a
  // descriptor, so runaway instantiation needs its own meter.
  std::optional<std::uint64_t> instantiation_limit;
};

// One parse run: the state plus the queue of pending continuation
// applications.  Every effect goes through the queue, so the call stack stays
// flat however deep the descriptor cascade gets.
class ParseRun {
 public:
  explicit ParseRun(std::vector<Token> input, ParseOptions options = {})
      : state_(std::move(input), options.fuel, options.instantiation_limit), options_(options) {}

  ParseState& state() noexcept { return state_; }
  const ParseState& state() const noexcept { return state_; }
  const ParseOptions& options() const noexcept { return options_; }

  // Queues the application of k at (pivot, right).
  void schedule(const Continuation& k, Index pivot, Index right) {
    queue_.push_back({&k.point(), k.left(), pivot, right});
  }
  // Runs the matcher of s at `left` with continuation k.
  void match(const Symbol& s, Index left, const Continuation& k);
  void match(const detail::SymbolImpl& s, Index left, const Continuation& k);
  // Processes queued work until none is left.
  void drain();

  ParseState take_state() && { return std::move(state_); }

 private:
  struct Task {
    const ContinuationPoint* point;
    Index left;
    Index pivot;
    Index right;
  };

  ParseState state_;
  ParseOptions options_;
  std::deque<Task> queue_;
};

// Registers k under c; runs the alternates when c has not produced any
// extent yet, otherwise replays k over the known extents.
template <typename AlternatesEffect>
void descend(ParseRun& run, const Commencement& c, const Continuation& k, AlternatesEffect&& alternates_effect) {
  run.state().add_continuation(c, k);
  auto extents = run.state().extents_for(c);
  if (extents.empty()) {
    alternates_effect();
  } else {
    for (Index r : extents) run.schedule(k, c.left, r);
  }
}

// Records extent r for c and applies every continuation waiting on c.
void ascend(ParseRun& run, const Commencement& c, Index r);

// Adds b to the forest and runs next_effect if b's descriptor is new.  Slots
// with an empty prefix and non-empty suffix have no BSR element.
template <typename NextEffect>
void continue_with(ParseRun& run, const BsrElement& b, NextEffect&& next_effect) {
  ParseState& st = run.state();
  if (!(b.slot.at_start() && !b.slot.at_end())) st.add_bsr(b);
  if (st.add_descriptor({b.slot, b.left, b.right})) {
    ++st.stats().descriptors_processed;
    st.consume_fuel();
    next_effect();
  }
}

// Invokes k at (pivot, right) immediately.
void apply_continuation(ParseRun& run, const Continuation& k, Index pivot, Index right);

struct ParseResult {
  bool accepted = false;
  // Right extents reached by the start symbol from 0, ascending.
  std::vector<Index> extents;
  ParseState state;
};

// Recognizes the whole input.  A token start symbol is wrapped in a
// nonterminal __START ::= s.
ParseResult run_recognize(const Symbol& s, std::vector<Token> input, ParseOptions options = {});
// Same run; `extents` lists every prefix length the start symbol derives.
ParseResult run_prefix(const Symbol& s, std::vector<Token> input, ParseOptions options = {});

}  // namespace gll
