#include "gll/parse_state.hpp"

#include <algorithm>
#include <tuple>

namespace gll {

namespace detail {

bool sorted_insert(std::vector<Index>& v, Index x) {
  // pivots and extents mostly arrive in ascending order
  if (v.empty() || v.back() < x) {
    v.push_back(x);
    return true;
  }
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) return false;
  v.insert(it, x);
  return true;
}

}  // namespace detail

bool DescriptorSet::insert(const Descriptor& d) {
  if (by_left_.size() <= d.left) by_left_.resize(d.left + 1);
  bool fresh = by_left_[d.left][d.right].insert(d.slot).second;
  size_ += fresh;
  return fresh;
}

bool DescriptorSet::contains(const Descriptor& d) const {
  if (by_left_.size() <= d.left) return false;
  const auto& rights = by_left_[d.left];
  auto it = rights.find(d.right);
  return it != rights.end() && it->second.contains(d.slot);
}

std::vector<Descriptor> DescriptorSet::sorted() const {
  std::vector<Descriptor> out;
  out.reserve(size_);
  for (Index l = 0; l < by_left_.size(); ++l)
    for (const auto& [r, slots] : by_left_[l])
      for (const Slot& s : slots) out.push_back({s, l, r});
  std::vector<std::pair<std::string, Descriptor>> keyed;
  keyed.reserve(out.size());
  for (const auto& d : out) keyed.emplace_back(render_slot(d.slot), d);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first, a.second.left, a.second.right) < std::tie(b.first, b.second.left, b.second.right);
  });
  for (std::size_t i = 0; i < keyed.size(); ++i) out[i] = keyed[i].second;
  return out;
}

bool ContinuationRelation::add(const Commencement& c, const Continuation& k) {
  ContinuationId cid = k.id();
  auto [it, fresh_cid] = cmap_.try_emplace(cid, k);
  if (!pairs_.insert({cid, c.left}).second) return false;
  grel_[{c.nonterminal, c.left}].push_back(it->second);
  return true;
}

std::span<const Continuation> ContinuationRelation::for_commencement(const Commencement& c) const {
  auto it = grel_.find({c.nonterminal, c.left});
  if (it == grel_.end()) return {};
  return it->second;
}

const Continuation* ContinuationRelation::find(const ContinuationId& cid) const {
  auto it = cmap_.find(cid);
  return it == cmap_.end() ? nullptr : &it->second;
}

bool ExtentRelation::add(const Commencement& c, Index r) {
  bool fresh = detail::sorted_insert(map_[{c.nonterminal, c.left}], r);
  size_ += fresh;
  return fresh;
}

std::span<const Index> ExtentRelation::extents(const Commencement& c) const {
  auto it = map_.find({c.nonterminal, c.left});
  if (it == map_.end()) return {};
  return it->second;
}

std::vector<std::pair<Commencement, Index>> ExtentRelation::sorted() const {
  std::vector<std::pair<Commencement, Index>> out;
  out.reserve(size_);
  for (const auto& [key, rs] : map_)
    for (Index r : rs) out.push_back({{key.nt, key.left}, r});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.nonterminal != b.first.nonterminal) return a.first.nonterminal < b.first.nonterminal;
    return std::tie(a.first.left, a.second) < std::tie(b.first.left, b.second);
  });
  return out;
}

bool BsrSet::add(const BsrElement& b) {
  bool fresh = detail::sorted_insert(map_[{b.slot, b.left, b.right}], b.pivot);
  size_ += fresh;
  return fresh;
}

std::span<const Index> BsrSet::pivots(const Slot& s, Index l, Index r) const {
  auto it = map_.find({s, l, r});
  if (it == map_.end()) return {};
  return it->second;
}

bool BsrSet::contains(const BsrElement& b) const {
  auto ks = pivots(b.slot, b.left, b.right);
  return std::binary_search(ks.begin(), ks.end(), b.pivot);
}

std::vector<BsrElement> BsrSet::sorted() const {
  std::vector<std::pair<std::string, BsrElement>> keyed;
  keyed.reserve(size_);
  for (const auto& [key, ks] : map_) {
    std::string rendered = render_slot(key.slot);
    for (Index k : ks) keyed.emplace_back(rendered, BsrElement{key.slot, key.left, k, key.right});
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first, a.second.left, a.second.pivot, a.second.right) <
           std::tie(b.first, b.second.left, b.second.pivot, b.second.right);
  });
  std::vector<BsrElement> out;
  out.reserve(keyed.size());
  for (auto& [_, b] : keyed) out.push_back(b);
  return out;
}

void ParseState::consume_fuel() {
  ++stats_.fuel_consumed;
  if (fuel_ && stats_.fuel_consumed > *fuel_) throw ResourceExhausted(ResourceExhausted::Meter::descriptors, *fuel_);
}

void ParseState::charge_instantiation() {
  ++stats_.instantiations;
  if (instantiation_limit_ && stats_.instantiations > *instantiation_limit_)
    throw ResourceExhausted(ResourceExhausted::Meter::instantiations, *instantiation_limit_);
}

void ParseState::note_failure(const Slot& slot, Index r) {
  FailureInfo& f = stats_.furthest_failure;
  if (f.position && *f.position > r) return;
  if (!f.position || *f.position < r) {
    f.position = r;
    f.slots.clear();
    f.got = r < input_.size() ? std::optional<Token>(input_[r]) : std::nullopt;
  }
  if (std::find(f.slots.begin(), f.slots.end(), slot) == f.slots.end()) f.slots.push_back(slot);
}

}  // namespace gll
