#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gll/continuation.hpp"
#include "gll/slot.hpp"
#include "gll/symbol_id.hpp"
#include "gll/token.hpp"

namespace gll {

class Grammar;

namespace detail {
struct SymbolImpl;
}

// A grammar symbol: a token with its pattern, or a nonterminal with compiled
// alternates.  Handles are cheap to copy; the owning Grammar must outlive them.
// A symbol obtained through Grammar::lazy is resolved on first use.
class Symbol {
 public:
  SymbolId id() const noexcept;
  bool is_token() const noexcept { return id().is_token(); }
  bool is_nonterminal() const noexcept { return id().is_applied(); }

  const TokenPattern& pattern() const;

  std::size_t alternate_count() const;
  std::span<const Symbol> alternate(std::size_t i) const;
  // Chain points of alternate i: one per dot position, the last one ascends.
  std::span<const ContinuationPoint> points(std::size_t i) const;

  // The concrete symbol behind a lazy handle, instantiating it if needed;
  // *instantiated reports whether this call created it.
  const detail::SymbolImpl& resolve(bool* instantiated = nullptr) const;

  friend bool operator==(const Symbol& a, const Symbol& b) noexcept { return a.id() == b.id(); }

 private:
  friend class Grammar;
  explicit Symbol(const detail::SymbolImpl* impl) : impl_(impl) {}
  const detail::SymbolImpl* impl_;
};

namespace detail {

struct CompiledAlternate {
  std::vector<Symbol> symbols;
  std::vector<ContinuationPoint> points;  // symbols.size() + 1
};

struct SymbolImpl {
  enum class Kind : std::uint8_t { token, nonterminal, deferred };

  SymbolImpl(SymbolId id, Kind kind) : id(id), kind(kind) {}

  SymbolId id;
  Kind kind;
  std::unique_ptr<TokenPattern> pattern;
  std::vector<CompiledAlternate> alternates;
  // deferred only
  Grammar* owner = nullptr;
  std::vector<Symbol> args;
  mutable std::atomic<const SymbolImpl*> target{nullptr};
};

}  // namespace detail

// Symbol registry and arena.  Tokens and nonterminals are memoized on their
// SymbolId, so equal ids always denote the same symbol.  Parameterized
// definitions are registered as constructors and instantiated on demand.
class Grammar {
 public:
  using Alternate = std::vector<Symbol>;
  using Constructor = std::function<std::vector<Alternate>(Grammar&, std::span<const Symbol> args)>;

  Grammar();
  ~Grammar();
  Grammar(const Grammar&) = delete;
  Grammar& operator=(const Grammar&) = delete;

  // Token symbol with id TokenName(pattern.name()).  The first pattern
  // registered under a name wins.
  Symbol token(TokenPattern pattern);
  Symbol literal(char c) { return token(TokenPattern::literal(c)); }

  // Registers a definition; its constructor receives the argument symbols and
  // returns the alternates.  References back to definitions from inside a
  // constructor should use lazy() so instantiation does not recurse.
  void define(std::string name, std::size_t arity, Constructor ctor);
  bool defines(std::string_view name) const;
  std::optional<std::size_t> arity(std::string_view name) const;

  // Instantiates name(args) now (memoized).
  Symbol apply(std::string_view name, std::span<const Symbol> args = {});
  Symbol apply(std::string_view name, std::initializer_list<Symbol> args) {
    return apply(name, std::span<const Symbol>(args.begin(), args.size()));
  }
  // Handle to name(args) that is instantiated when the engine first needs it.
  Symbol lazy(std::string_view name, std::span<const Symbol> args = {});
  Symbol lazy(std::string_view name, std::initializer_list<Symbol> args) {
    return lazy(name, std::span<const Symbol>(args.begin(), args.size()));
  }

  // A nonterminal with explicit alternates; if the id already exists the
  // existing symbol is returned unchanged.
  Symbol nonterminal(std::string_view name, std::span<const Symbol> args, std::vector<Alternate> alternates);
  Symbol nonterminal(std::string_view name, std::vector<Alternate> alternates) {
    return nonterminal(name, {}, std::move(alternates));
  }

  std::optional<Symbol> find(SymbolId id) const;
  // Number of concrete nonterminals created so far.
  std::size_t instantiation_count() const;

  // Builds a standalone nonterminal not entered into the registry; used for
  // run-local wrappers.
  static std::unique_ptr<detail::SymbolImpl> make_nonterminal(SymbolId id, std::vector<Alternate> alternates);

 private:
  friend class Symbol;
  const detail::SymbolImpl* resolve_deferred(const detail::SymbolImpl& d, bool* instantiated);

  struct Definition {
    std::size_t arity;
    Constructor ctor;
  };

  mutable std::recursive_mutex mutex_;
  std::vector<std::unique_ptr<detail::SymbolImpl>> impls_;
  std::unordered_map<SymbolId, const detail::SymbolImpl*> concrete_;
  std::unordered_map<SymbolId, const detail::SymbolImpl*> deferred_;
  std::unordered_map<std::string, Definition> definitions_;
  std::size_t nonterminals_ = 0;
};

// Reserved name of the artificial start nonterminal.
inline constexpr std::string_view start_name = "__START";

}  // namespace gll
