#include "psp/prolog/database.hpp"

#include <algorithm>

namespace psp::prolog {

void ClauseStore::add_back(ClausePtr clause) {
    preds_[pred_key(*clause->head)].push_back(std::move(clause));
}

void ClauseStore::add_front(ClausePtr clause) {
    auto& list = preds_[pred_key(*clause->head)];
    list.insert(list.begin(), std::move(clause));
}

bool ClauseStore::erase(const PredKey& key, const ClausePtr& clause) {
    auto it = preds_.find(key);
    if (it == preds_.end())
        return false;
    auto& list = it->second;
    auto pos = std::find(list.begin(), list.end(), clause);
    if (pos == list.end())
        return false;
    list.erase(pos);
    if (list.empty())
        preds_.erase(it);
    return true;
}

const std::vector<ClausePtr>* ClauseStore::find(const PredKey& key) const {
    auto it = preds_.find(key);
    return it == preds_.end() ? nullptr : &it->second;
}

std::size_t ClauseStore::clause_count() const {
    std::size_t n = 0;
    for (const auto& [key, list] : preds_)
        n += list.size();
    return n;
}

std::vector<ClausePtr> Database::clauses_for(const PredKey& key) const {
    std::vector<ClausePtr> out;
    if (const auto* req = request_.find(key))
        out.insert(out.end(), req->begin(), req->end());
    if (base_)
        if (const auto* base = base_->find(key))
            out.insert(out.end(), base->begin(), base->end());
    return out;
}

bool Database::has_predicate(const PredKey& key) const {
    if (request_.find(key))
        return true;
    return base_ && base_->find(key);
}

} // namespace psp::prolog
