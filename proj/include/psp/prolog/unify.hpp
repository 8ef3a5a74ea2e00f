#pragma once

#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "psp/prolog/term.hpp"

namespace psp::prolog {

// Variable bindings plus an undo trail for backtracking. Dereference
// chains always terminate: the occurs check (on unless explicitly
// disabled) keeps bindings acyclic.
class BindingStore {
public:
    std::size_t mark() const { return trail_.size(); }

    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            map_.erase(trail_.back());
            trail_.pop_back();
        }
    }

    void bind(std::uint64_t var_id, TermPtr value) {
        map_.emplace(var_id, std::move(value));
        trail_.push_back(var_id);
    }

    const TermPtr* lookup(std::uint64_t var_id) const {
        auto it = map_.find(var_id);
        return it == map_.end() ? nullptr : &it->second;
    }

    // Follows Var bindings until an unbound var or a non-var term.
    const TermPtr& shallow_deref(const TermPtr& t) const;

    // Deep substitution: every bound variable replaced by its value.
    TermPtr resolve(const TermPtr& t) const;

    const std::unordered_map<std::uint64_t, TermPtr>& bindings() const { return map_; }

private:
    std::unordered_map<std::uint64_t, TermPtr> map_;
    std::vector<std::uint64_t> trail_;
};

// Extends the store so a and b dereference to identical terms; on failure
// the store is restored to its state at entry.
bool unify(const TermPtr& a, const TermPtr& b, BindingStore& store,
           bool occurs_check = true);

// True when var_id occurs in t under the store's bindings.
bool occurs_in(std::uint64_t var_id, const TermPtr& t, const BindingStore& store);

// Structural equality under current bindings (the ==/2 relation).
bool equal_under(const TermPtr& a, const TermPtr& b, const BindingStore& store);

// Rebuilds t with bindings substituted; each unbound variable is passed
// through var_fn (identity for plain resolution, fresh ids for clause
// snapshots). Iterative, so term depth is not limited by the C++ stack.
TermPtr deep_transform(const TermPtr& t, const BindingStore* store,
                       const std::function<TermPtr(const TermPtr&)>& var_fn);

// The functional view used by the public unify operation: a plain map
// from variable id to term.
using Substitution = std::unordered_map<std::uint64_t, TermPtr>;

std::optional<Substitution> unify(const TermPtr& a, const TermPtr& b,
                                  const Substitution& s, bool occurs_check = true);

TermPtr apply_substitution(const TermPtr& t, const Substitution& s);

} // namespace psp::prolog
