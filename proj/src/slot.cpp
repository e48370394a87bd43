#include "gll/slot.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace gll {

namespace detail {

struct AlternateNode {
  SymbolId lhs;
  std::vector<SymbolId> rhs;
};

namespace {

class AlternatePool {
 public:
  const AlternateNode* intern(SymbolId lhs, std::span<const SymbolId> pre, std::span<const SymbolId> post) {
    std::size_t h = std::hash<SymbolId>{}(lhs);
    for (auto part : {pre, post}) {
      for (SymbolId s : part) h ^= std::hash<SymbolId>{}(s) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    std::lock_guard lock(mutex_);
    auto [first, last] = index_.equal_range(h);
    for (auto it = first; it != last; ++it) {
      const AlternateNode* n = it->second;
      if (n->lhs == lhs && n->rhs.size() == pre.size() + post.size() &&
          std::equal(pre.begin(), pre.end(), n->rhs.begin()) &&
          std::equal(post.begin(), post.end(), n->rhs.begin() + static_cast<std::ptrdiff_t>(pre.size()))) {
        return n;
      }
    }
    AlternateNode node{lhs, {}};
    node.rhs.reserve(pre.size() + post.size());
    node.rhs.insert(node.rhs.end(), pre.begin(), pre.end());
    node.rhs.insert(node.rhs.end(), post.begin(), post.end());
    nodes_.push_back(std::move(node));
    index_.emplace(h, &nodes_.back());
    return &nodes_.back();
  }

 private:
  std::mutex mutex_;
  std::deque<AlternateNode> nodes_;
  std::unordered_multimap<std::size_t, const AlternateNode*> index_;
};

AlternatePool& pool() {
  static AlternatePool p;
  return p;
}

}  // namespace
}  // namespace detail

Slot Slot::make(SymbolId lhs, std::span<const SymbolId> pre, std::span<const SymbolId> post) {
  return Slot(detail::pool().intern(lhs, pre, post), static_cast<std::uint32_t>(pre.size()));
}

Slot Slot::at(SymbolId lhs, std::span<const SymbolId> rhs, std::size_t dot) {
  if (dot > rhs.size()) throw std::invalid_argument("slot dot beyond end of alternate");
  return make(lhs, rhs.first(dot), rhs.subspan(dot));
}

SymbolId Slot::lhs() const noexcept { return alt_->lhs; }
std::span<const SymbolId> Slot::rhs() const noexcept { return alt_->rhs; }

std::strong_ordering operator<=>(const Slot& a, const Slot& b) {
  if (a.alt_ != b.alt_) {
    if (auto c = a.lhs() <=> b.lhs(); c != 0) return c;
    if (auto c = compare_ids(a.rhs(), b.rhs()); c != 0) return c;
  }
  return a.dot_ <=> b.dot_;
}

Slot slot_advance(const Slot& slot) {
  if (slot.at_end()) throw std::invalid_argument("slot_advance: dot already at end of " + render_slot(slot));
  return Slot::at(slot.lhs(), slot.rhs(), slot.dot() + 1);
}

std::string render_slot(const Slot& slot) {
  std::string out = slot.lhs().str() + " ::=";
  for (SymbolId s : slot.pre()) out += ' ' + s.str();
  out += " .";
  for (SymbolId s : slot.post()) out += ' ' + s.str();
  return out;
}

bool bsr_dump_less(const BsrElement& a, const BsrElement& b) {
  if (a.slot != b.slot) {
    const std::string ra = render_slot(a.slot), rb = render_slot(b.slot);
    if (ra != rb) return ra < rb;
  }
  return std::tie(a.left, a.pivot, a.right) < std::tie(b.left, b.pivot, b.right);
}

std::string render_bsr(const BsrElement& b) {
  return render_slot(b.slot) + ", " + std::to_string(b.left) + ", " + std::to_string(b.pivot) + ", " +
         std::to_string(b.right);
}

std::string render_descriptor(const Descriptor& d) {
  return render_slot(d.slot) + ", " + std::to_string(d.left) + ", " + std::to_string(d.right);
}

}  // namespace gll
