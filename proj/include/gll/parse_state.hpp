#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gll/continuation.hpp"
#include "gll/slot.hpp"
#include "gll/token.hpp"

namespace gll {

// Thrown when a run uses up its fuel: the processed-descriptor budget, or the
// cap on nonterminals instantiated during the run.
class ResourceExhausted : public std::runtime_error {
 public:
  enum class Meter : std::uint8_t { descriptors, instantiations };

  ResourceExhausted(Meter meter, std::uint64_t budget)
      : std::runtime_error(meter == Meter::descriptors
                               ? "fuel exhausted after " + std::to_string(budget) + " descriptors"
                               : "fuel exhausted after " + std::to_string(budget) + " nonterminal instantiations"),
        meter_(meter),
        budget_(budget) {}
  Meter meter() const noexcept { return meter_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  Meter meter_;
  std::uint64_t budget_;
};

namespace detail {

inline std::size_t mix(std::size_t h, std::size_t v) noexcept {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

struct CommKey {
  SymbolId nt;
  Index left;
  friend bool operator==(const CommKey&, const CommKey&) = default;
};

struct ExtentKey {
  Slot slot;
  Index left;
  Index right;
  friend bool operator==(const ExtentKey&, const ExtentKey&) = default;
};

struct CommKeyHash {
  std::size_t operator()(const CommKey& k) const noexcept { return mix(std::hash<SymbolId>{}(k.nt), k.left); }
};
struct CidHash {
  std::size_t operator()(const ContinuationId& c) const noexcept { return mix(std::hash<Slot>{}(c.slot), c.left); }
};
struct ExtentKeyHash {
  std::size_t operator()(const ExtentKey& k) const noexcept {
    return mix(mix(std::hash<Slot>{}(k.slot), k.left), k.right);
  }
};

// (cid, commencement left) pair; the commencement's nonterminal is implied by
// the cid's slot.
struct GrelKey {
  ContinuationId cid;
  Index comm_left;
  friend bool operator==(const GrelKey&, const GrelKey&) = default;
};
struct GrelKeyHash {
  std::size_t operator()(const GrelKey& k) const noexcept { return mix(CidHash{}(k.cid), k.comm_left); }
};

// Inserts v into an ascending vector; false if already present.
bool sorted_insert(std::vector<Index>& v, Index x);

}  // namespace detail

// Seen descriptors: left extent -> right extent -> slots.
class DescriptorSet {
 public:
  // Returns true if d was not yet present.
  bool insert(const Descriptor& d);
  bool contains(const Descriptor& d) const;
  std::size_t size() const noexcept { return size_; }
  // Sorted by (rendered slot, left, right).
  std::vector<Descriptor> sorted() const;

 private:
  std::vector<std::unordered_map<Index, std::unordered_set<Slot>>> by_left_;
  std::size_t size_ = 0;
};

// grel + cmap.
class ContinuationRelation {
 public:
  // Registers cid under c; the first continuation stored for a cid wins.
  // Returns false if (c, cid) was already present.
  bool add(const Commencement& c, const Continuation& k);
  // Every continuation registered for c, once each, in registration order.
  std::span<const Continuation> for_commencement(const Commencement& c) const;
  const Continuation* find(const ContinuationId& cid) const;
  std::size_t size() const noexcept { return pairs_.size(); }
  std::size_t cmap_size() const noexcept { return cmap_.size(); }

 private:
  std::unordered_map<detail::CommKey, std::vector<Continuation>, detail::CommKeyHash> grel_;
  std::unordered_set<detail::GrelKey, detail::GrelKeyHash> pairs_;
  std::unordered_map<ContinuationId, Continuation, detail::CidHash> cmap_;
};

// prel.
class ExtentRelation {
 public:
  bool add(const Commencement& c, Index r);
  // Ascending.
  std::span<const Index> extents(const Commencement& c) const;
  std::size_t size() const noexcept { return size_; }
  // Every (commencement, extent) pair, sorted by (nonterminal, left, right).
  std::vector<std::pair<Commencement, Index>> sorted() const;

 private:
  std::unordered_map<detail::CommKey, std::vector<Index>, detail::CommKeyHash> map_;
  std::size_t size_ = 0;
};

// bsrs, indexed by (slot, l, r) -> pivots.
class BsrSet {
 public:
  bool add(const BsrElement& b);
  std::span<const Index> pivots(const Slot& s, Index l, Index r) const;
  bool contains(const BsrElement& b) const;
  std::size_t size() const noexcept { return size_; }
  // Sorted by (rendered slot, l, k, r).
  std::vector<BsrElement> sorted() const;

  template <typename F>
  void for_each(F&& f) const {
    for (const auto& [key, ks] : map_)
      for (Index k : ks) f(BsrElement{key.slot, key.left, k, key.right});
  }

 private:
  std::unordered_map<detail::ExtentKey, std::vector<Index>, detail::ExtentKeyHash> map_;
  std::size_t size_ = 0;
};

struct FailureInfo {
  std::optional<Index> position;
  std::vector<Slot> slots;  // distinct, first-attempt order
  std::optional<Token> got;
};

struct ParseStats {
  std::uint64_t descriptors_processed = 0;
  std::uint64_t fuel_consumed = 0;
  std::uint64_t continuations_applied = 0;
  std::uint64_t instantiations = 0;
  FailureInfo furthest_failure;
};

class ParseState {
 public:
  explicit ParseState(std::vector<Token> input, std::optional<std::uint64_t> fuel = std::nullopt,
                      std::optional<std::uint64_t> instantiation_limit = std::nullopt)
      : input_(std::move(input)), fuel_(fuel), instantiation_limit_(instantiation_limit) {}

  std::span<const Token> input() const noexcept { return input_; }
  Index length() const noexcept { return static_cast<Index>(input_.size()); }
  std::optional<std::uint64_t> fuel() const noexcept { return fuel_; }
  std::optional<std::uint64_t> instantiation_limit() const noexcept { return instantiation_limit_; }

  bool add_descriptor(const Descriptor& d) { return uset_.insert(d); }
  bool has_descriptor(const Descriptor& d) const { return uset_.contains(d); }

  bool add_continuation(const Commencement& c, const Continuation& k) { return rel_.add(c, k); }
  std::span<const Continuation> continuations_for(const Commencement& c) const { return rel_.for_commencement(c); }

  bool add_extent(const Commencement& c, Index r) { return prel_.add(c, r); }
  std::span<const Index> extents_for(const Commencement& c) const { return prel_.extents(c); }

  bool add_bsr(const BsrElement& b) { return bsrs_.add(b); }
  std::span<const Index> pivots(const Slot& s, Index l, Index r) const { return bsrs_.pivots(s, l, r); }

  const DescriptorSet& uset() const noexcept { return uset_; }
  const ContinuationRelation& grel() const noexcept { return rel_; }
  const ExtentRelation& prel() const noexcept { return prel_; }
  const BsrSet& bsrs() const noexcept { return bsrs_; }

  ParseStats& stats() noexcept { return stats_; }
  const ParseStats& stats() const noexcept { return stats_; }

  // Charges one processed descriptor; throws ResourceExhausted past the budget.
  void consume_fuel();
  // Charges one nonterminal instantiated on behalf of this run.
  void charge_instantiation();
  // Records a failed token match at position r from `slot`.
  void note_failure(const Slot& slot, Index r);

  // Ties the lifetime of run-local continuation points to the state.
  void retain(std::shared_ptr<const void> p) { retained_.push_back(std::move(p)); }

 private:
  std::vector<Token> input_;
  std::optional<std::uint64_t> fuel_;
  std::optional<std::uint64_t> instantiation_limit_;
  DescriptorSet uset_;
  ContinuationRelation rel_;
  ExtentRelation prel_;
  BsrSet bsrs_;
  ParseStats stats_;
  std::vector<std::shared_ptr<const void>> retained_;
};

}  // namespace gll

template <>
struct std::hash<gll::ContinuationId> : gll::detail::CidHash {};
