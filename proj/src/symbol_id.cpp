#include "gll/symbol_id.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <ostream>
#include <unordered_map>

namespace gll {

namespace detail {

struct SymbolNode {
  SymbolId::Kind kind;
  std::string name;
  std::vector<SymbolId> args;
};

namespace {

std::size_t hash_parts(SymbolId::Kind kind, std::string_view name, std::span<const SymbolId> args) {
  std::size_t h = std::hash<std::string_view>{}(name) ^ (static_cast<std::size_t>(kind) + 0x9e3779b9);
  for (SymbolId a : args) {
    h ^= std::hash<SymbolId>{}(a) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

class SymbolPool {
 public:
  const SymbolNode* intern(SymbolId::Kind kind, std::string_view name, std::span<const SymbolId> args) {
    const std::size_t h = hash_parts(kind, name, args);
    std::lock_guard lock(mutex_);
    auto [first, last] = index_.equal_range(h);
    for (auto it = first; it != last; ++it) {
      const SymbolNode* n = it->second;
      if (n->kind == kind && n->name == name && std::equal(n->args.begin(), n->args.end(), args.begin(), args.end())) {
        return n;
      }
    }
    nodes_.push_back(SymbolNode{kind, std::string(name), std::vector<SymbolId>(args.begin(), args.end())});
    const SymbolNode* n = &nodes_.back();
    index_.emplace(h, n);
    return n;
  }

 private:
  std::mutex mutex_;
  std::deque<SymbolNode> nodes_;
  std::unordered_multimap<std::size_t, const SymbolNode*> index_;
};

SymbolPool& pool() {
  static SymbolPool p;
  return p;
}

}  // namespace
}  // namespace detail

SymbolId SymbolId::token(std::string_view name) {
  return SymbolId(detail::pool().intern(Kind::token, name, {}));
}

SymbolId SymbolId::applied(std::string_view name, std::span<const SymbolId> args) {
  return SymbolId(detail::pool().intern(Kind::applied, name, args));
}

SymbolId::Kind SymbolId::kind() const noexcept { return node_->kind; }
const std::string& SymbolId::name() const noexcept { return node_->name; }
std::span<const SymbolId> SymbolId::args() const noexcept { return node_->args; }

std::string SymbolId::str() const {
  std::string out = node_->name;
  if (!node_->args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < node_->args.size(); ++i) {
      if (i) out += ',';
      out += node_->args[i].str();
    }
    out += ')';
  }
  return out;
}

std::strong_ordering operator<=>(SymbolId a, SymbolId b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.name().compare(b.name()); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  return compare_ids(a.args(), b.args());
}

std::strong_ordering compare_ids(std::span<const SymbolId> a, std::span<const SymbolId> b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a[i] <=> b[i]; c != 0) return c;
  }
  return a.size() <=> b.size();
}

std::ostream& operator<<(std::ostream& os, SymbolId id) { return os << id.str(); }

}  // namespace gll
