#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "gll/symbol_id.hpp"

namespace gll {

// Input position.
using Index = std::uint32_t;

namespace detail {
struct AlternateNode;
}

// Grammar position x ::= alpha . beta.  The alternate (lhs, alpha ++ beta) is
// interned, so a slot is a pointer plus the dot offset.
class Slot {
 public:
  static Slot make(SymbolId lhs, std::span<const SymbolId> pre, std::span<const SymbolId> post);
  static Slot make(SymbolId lhs, std::initializer_list<SymbolId> pre, std::initializer_list<SymbolId> post) {
    return make(lhs, std::span<const SymbolId>(pre.begin(), pre.size()),
                std::span<const SymbolId>(post.begin(), post.size()));
  }
  // Slot at the given dot offset of an interned alternate.
  static Slot at(SymbolId lhs, std::span<const SymbolId> rhs, std::size_t dot);

  SymbolId lhs() const noexcept;
  std::span<const SymbolId> rhs() const noexcept;
  std::span<const SymbolId> pre() const noexcept { return rhs().first(dot_); }
  std::span<const SymbolId> post() const noexcept { return rhs().subspan(dot_); }
  std::uint32_t dot() const noexcept { return dot_; }
  bool at_end() const noexcept { return dot_ == rhs().size(); }
  bool at_start() const noexcept { return dot_ == 0; }

  const detail::AlternateNode* alternate() const noexcept { return alt_; }

  friend bool operator==(const Slot& a, const Slot& b) noexcept { return a.alt_ == b.alt_ && a.dot_ == b.dot_; }
  // Structural: lhs, then full alternate, then dot.
  friend std::strong_ordering operator<=>(const Slot& a, const Slot& b);

 private:
  Slot(const detail::AlternateNode* alt, std::uint32_t dot) : alt_(alt), dot_(dot) {}
  const detail::AlternateNode* alt_;
  std::uint32_t dot_;
};

// Moves the dot one symbol to the right.  Throws std::invalid_argument when
// the slot is already at the end of its alternate.
Slot slot_advance(const Slot& slot);

// "lhs ::= pre . post"
std::string render_slot(const Slot& slot);

struct Descriptor {
  Slot slot;
  Index left;
  Index right;
  friend bool operator==(const Descriptor&, const Descriptor&) = default;
};

struct Commencement {
  SymbolId nonterminal;
  Index left;
  friend bool operator==(const Commencement&, const Commencement&) = default;
};

struct ContinuationId {
  Slot slot;
  Index left;
  friend bool operator==(const ContinuationId&, const ContinuationId&) = default;
};

struct BsrElement {
  Slot slot;
  Index left;
  Index pivot;
  Index right;
  friend bool operator==(const BsrElement&, const BsrElement&) = default;
};

// Dump order: rendered slot, then l, k, r.
bool bsr_dump_less(const BsrElement& a, const BsrElement& b);
std::string render_bsr(const BsrElement& b);
std::string render_descriptor(const Descriptor& d);

}  // namespace gll

template <>
struct std::hash<gll::Slot> {
  std::size_t operator()(const gll::Slot& s) const noexcept {
    return std::hash<const void*>{}(s.alternate()) * 31u + s.dot();
  }
};
