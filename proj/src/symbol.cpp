#include "gll/symbol.hpp"

#include <stdexcept>

namespace gll {

using detail::SymbolImpl;

namespace {

std::vector<SymbolId> ids_of(std::span<const Symbol> syms) {
  std::vector<SymbolId> ids;
  ids.reserve(syms.size());
  for (const Symbol& s : syms) ids.push_back(s.id());
  return ids;
}

void check_name(std::string_view name) {
  if (name == start_name) throw std::invalid_argument("nonterminal name " + std::string(start_name) + " is reserved");
}

}  // namespace

SymbolId Symbol::id() const noexcept { return impl_->id; }

const SymbolImpl& Symbol::resolve(bool* instantiated) const {
  if (impl_->kind != SymbolImpl::Kind::deferred) return *impl_;
  const SymbolImpl* t = impl_->target.load(std::memory_order_acquire);
  if (!t) {
    t = impl_->owner->resolve_deferred(*impl_, instantiated);
    impl_->target.store(t, std::memory_order_release);
  }
  return *t;
}

const TokenPattern& Symbol::pattern() const {
  const SymbolImpl& r = resolve();
  if (r.kind != SymbolImpl::Kind::token) throw std::logic_error(id().str() + " is not a token");
  return *r.pattern;
}

std::size_t Symbol::alternate_count() const { return resolve().alternates.size(); }

std::span<const Symbol> Symbol::alternate(std::size_t i) const { return resolve().alternates.at(i).symbols; }

std::span<const ContinuationPoint> Symbol::points(std::size_t i) const { return resolve().alternates.at(i).points; }

Grammar::Grammar() = default;
Grammar::~Grammar() = default;

Symbol Grammar::token(TokenPattern pattern) {
  SymbolId id = SymbolId::token(pattern.name());
  std::lock_guard lock(mutex_);
  if (auto it = concrete_.find(id); it != concrete_.end()) return Symbol(it->second);
  auto impl = std::make_unique<SymbolImpl>(id, SymbolImpl::Kind::token);
  impl->pattern = std::make_unique<TokenPattern>(std::move(pattern));
  const SymbolImpl* p = impl.get();
  impls_.push_back(std::move(impl));
  concrete_.emplace(id, p);
  return Symbol(p);
}

void Grammar::define(std::string name, std::size_t arity, Constructor ctor) {
  check_name(name);
  std::lock_guard lock(mutex_);
  if (!definitions_.emplace(std::move(name), Definition{arity, std::move(ctor)}).second)
    throw std::invalid_argument("duplicate definition");
}

bool Grammar::defines(std::string_view name) const {
  std::lock_guard lock(mutex_);
  return definitions_.contains(std::string(name));
}

std::optional<std::size_t> Grammar::arity(std::string_view name) const {
  std::lock_guard lock(mutex_);
  auto it = definitions_.find(std::string(name));
  if (it == definitions_.end()) return std::nullopt;
  return it->second.arity;
}

Symbol Grammar::apply(std::string_view name, std::span<const Symbol> args) {
  SymbolId id = SymbolId::applied(name, ids_of(args));
  std::lock_guard lock(mutex_);
  if (auto it = concrete_.find(id); it != concrete_.end()) return Symbol(it->second);
  auto def = definitions_.find(std::string(name));
  if (def == definitions_.end()) throw std::out_of_range("no definition for " + id.str());
  if (def->second.arity != args.size())
    throw std::invalid_argument(std::string(name) + " expects " + std::to_string(def->second.arity) +
                                " argument(s), got " + std::to_string(args.size()));
  std::vector<Alternate> alts = def->second.ctor(*this, args);
  // the constructor may have registered the id itself
  if (auto it = concrete_.find(id); it != concrete_.end()) return Symbol(it->second);
  auto impl = make_nonterminal(id, std::move(alts));
  const SymbolImpl* p = impl.get();
  impls_.push_back(std::move(impl));
  concrete_.emplace(id, p);
  ++nonterminals_;
  return Symbol(p);
}

Symbol Grammar::lazy(std::string_view name, std::span<const Symbol> args) {
  SymbolId id = SymbolId::applied(name, ids_of(args));
  std::lock_guard lock(mutex_);
  if (auto it = concrete_.find(id); it != concrete_.end()) return Symbol(it->second);
  if (auto it = deferred_.find(id); it != deferred_.end()) return Symbol(it->second);
  if (auto def = definitions_.find(std::string(name)); def != definitions_.end() && def->second.arity != args.size())
    throw std::invalid_argument(std::string(name) + " expects " + std::to_string(def->second.arity) +
                                " argument(s), got " + std::to_string(args.size()));
  auto impl = std::make_unique<SymbolImpl>(id, SymbolImpl::Kind::deferred);
  impl->owner = this;
  impl->args.assign(args.begin(), args.end());
  const SymbolImpl* p = impl.get();
  impls_.push_back(std::move(impl));
  deferred_.emplace(id, p);
  return Symbol(p);
}

const SymbolImpl* Grammar::resolve_deferred(const SymbolImpl& d, bool* instantiated) {
  std::lock_guard lock(mutex_);
  if (auto it = concrete_.find(d.id); it != concrete_.end()) return it->second;
  if (instantiated) *instantiated = true;
  return apply(d.id.name(), d.args).impl_;
}

Symbol Grammar::nonterminal(std::string_view name, std::span<const Symbol> args, std::vector<Alternate> alternates) {
  check_name(name);
  SymbolId id = SymbolId::applied(name, ids_of(args));
  std::lock_guard lock(mutex_);
  if (auto it = concrete_.find(id); it != concrete_.end()) return Symbol(it->second);
  auto impl = make_nonterminal(id, std::move(alternates));
  const SymbolImpl* p = impl.get();
  impls_.push_back(std::move(impl));
  concrete_.emplace(id, p);
  ++nonterminals_;
  return Symbol(p);
}

std::optional<Symbol> Grammar::find(SymbolId id) const {
  std::lock_guard lock(mutex_);
  if (auto it = concrete_.find(id); it != concrete_.end()) return Symbol(it->second);
  return std::nullopt;
}

std::size_t Grammar::instantiation_count() const {
  std::lock_guard lock(mutex_);
  return nonterminals_;
}

std::unique_ptr<SymbolImpl> Grammar::make_nonterminal(SymbolId id, std::vector<Alternate> alternates) {
  auto impl = std::make_unique<SymbolImpl>(id, SymbolImpl::Kind::nonterminal);
  impl->alternates.resize(alternates.size());
  for (std::size_t i = 0; i < alternates.size(); ++i) {
    detail::CompiledAlternate& alt = impl->alternates[i];
    alt.symbols = std::move(alternates[i]);
    const std::vector<SymbolId> rhs = ids_of(alt.symbols);
    alt.points.reserve(rhs.size() + 1);
    for (std::size_t j = 0; j <= rhs.size(); ++j) {
      alt.points.push_back(ContinuationPoint{Slot::at(id, rhs, j), ContinuationPoint::Role::chain,
                                             j < rhs.size() ? &alt.symbols[j] : nullptr, {}});
    }
  }
  return impl;
}

}  // namespace gll
