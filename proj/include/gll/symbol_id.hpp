#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gll {

namespace detail {
struct SymbolNode;
}

// Structural name of a grammar symbol: a token name, or a nonterminal name
// applied to zero or more argument ids.  Ids are interned, so equality and
// hashing are pointer operations; ordering is structural.
class SymbolId {
 public:
  enum class Kind : std::uint8_t { token, applied };

  static SymbolId token(std::string_view name);
  static SymbolId applied(std::string_view name, std::span<const SymbolId> args = {});
  static SymbolId applied(std::string_view name, std::initializer_list<SymbolId> args) {
    return applied(name, std::span<const SymbolId>(args.begin(), args.size()));
  }

  Kind kind() const noexcept;
  bool is_token() const noexcept { return kind() == Kind::token; }
  bool is_applied() const noexcept { return kind() == Kind::applied; }
  const std::string& name() const noexcept;
  std::span<const SymbolId> args() const noexcept;

  // Rendered form: token names verbatim, applications as name(arg,...).
  std::string str() const;

  const detail::SymbolNode* node() const noexcept { return node_; }

  friend bool operator==(SymbolId a, SymbolId b) noexcept { return a.node_ == b.node_; }
  friend std::strong_ordering operator<=>(SymbolId a, SymbolId b);

 private:
  explicit SymbolId(const detail::SymbolNode* node) : node_(node) {}
  const detail::SymbolNode* node_;
};

std::ostream& operator<<(std::ostream& os, SymbolId id);

// Lexicographic structural comparison of id sequences.
std::strong_ordering compare_ids(std::span<const SymbolId> a, std::span<const SymbolId> b);

}  // namespace gll

template <>
struct std::hash<gll::SymbolId> {
  std::size_t operator()(gll::SymbolId id) const noexcept {
    return std::hash<const void*>{}(id.node());
  }
};
