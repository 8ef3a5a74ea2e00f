#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "psp/prolog/term.hpp"

namespace psp::prolog {

struct Clause {
    TermPtr head;
    TermPtr body; // atom true for facts
};

using ClausePtr = std::shared_ptr<const Clause>;

// Ordered clause lists keyed by functor/arity.
class ClauseStore {
public:
    void add_back(ClausePtr clause);
    void add_front(ClausePtr clause);
    bool erase(const PredKey& key, const ClausePtr& clause); // by identity

    const std::vector<ClausePtr>* find(const PredKey& key) const;
    bool empty() const { return preds_.empty(); }
    std::size_t clause_count() const;

private:
    std::unordered_map<PredKey, std::vector<ClausePtr>, PredKeyHash> preds_;
};

// Layered store: an immutable base shared across sessions plus a mutable
// per-request layer. Lookup consults the request layer first, then the
// base, preserving assertion order within each.
class Database {
public:
    Database() = default;
    explicit Database(std::shared_ptr<const ClauseStore> base)
        : base_(std::move(base)) {}

    void assert_back(ClausePtr clause) { request_.add_back(std::move(clause)); }
    void assert_front(ClausePtr clause) { request_.add_front(std::move(clause)); }

    // Snapshot of the clauses visible for one call, request layer first.
    std::vector<ClausePtr> clauses_for(const PredKey& key) const;

    bool has_predicate(const PredKey& key) const;

    // Removes the given clause from the request layer (base clauses are
    // not retractable).
    bool retract(const PredKey& key, const ClausePtr& clause) {
        return request_.erase(key, clause);
    }

    const std::vector<ClausePtr>* request_clauses(const PredKey& key) const {
        return request_.find(key);
    }

    ClauseStore& request_layer() { return request_; }
    const std::shared_ptr<const ClauseStore>& base_layer() const { return base_; }

private:
    std::shared_ptr<const ClauseStore> base_;
    ClauseStore request_;
};

} // namespace psp::prolog
