#pragma once

#include <cstdint>
#include <functional>

#include "gll/slot.hpp"

namespace gll {

class ParseRun;
class Symbol;

// The static part of a continuation: the slot it continues from and what to
// do once that slot has been reached.  Chain points belong to a nonterminal's
// alternate; `next` is the symbol after the dot, or null at the end of the
// alternate (ascend).  The start point records accepted right extents.
// Probe points run an arbitrary callback and exist for instrumentation.
struct ContinuationPoint {
  enum class Role : std::uint8_t { chain, start, probe };

  Slot slot;
  Role role = Role::chain;
  const Symbol* next = nullptr;
  std::function<void(ParseRun&, Index pivot, Index right, Index left)> probe;
};

// A continuation closes a point over its left extent.  Invoking it with
// (pivot, right) performs the continue action for (slot, left, pivot, right).
class Continuation {
 public:
  Continuation(const ContinuationPoint& point, Index left) noexcept : point_(&point), left_(left) {}

  const ContinuationPoint& point() const noexcept { return *point_; }
  const Slot& slot() const noexcept { return point_->slot; }
  Index left() const noexcept { return left_; }
  ContinuationId id() const noexcept { return {point_->slot, left_}; }

 private:
  const ContinuationPoint* point_;
  Index left_;
};

}  // namespace gll
