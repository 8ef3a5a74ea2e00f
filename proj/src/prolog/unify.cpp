#include "psp/prolog/unify.hpp"

#include <utility>

namespace psp::prolog {

const TermPtr& BindingStore::shallow_deref(const TermPtr& t) const {
    const TermPtr* cur = &t;
    while ((*cur)->is_var()) {
        const TermPtr* bound = lookup((*cur)->var_id);
        if (!bound)
            break;
        cur = bound;
    }
    return *cur;
}

TermPtr BindingStore::resolve(const TermPtr& t) const {
    return deep_transform(t, this, [](const TermPtr& v) { return v; });
}

bool occurs_in(std::uint64_t var_id, const TermPtr& t, const BindingStore& store) {
    std::vector<const TermPtr*> work{&t};
    while (!work.empty()) {
        const TermPtr& cur = store.shallow_deref(*work.back());
        work.pop_back();
        if (cur->is_var()) {
            if (cur->var_id == var_id)
                return true;
        } else if (cur->is_compound()) {
            for (const auto& arg : cur->args)
                work.push_back(&arg);
        }
    }
    return false;
}

namespace {

bool bind_var(const TermPtr& var, const TermPtr& value, BindingStore& store,
              bool occurs_check) {
    if (value->is_var() && value->var_id == var->var_id)
        return true;
    if (occurs_check && occurs_in(var->var_id, value, store))
        return false;
    store.bind(var->var_id, value);
    return true;
}

} // namespace

bool unify(const TermPtr& a, const TermPtr& b, BindingStore& store,
           bool occurs_check) {
    std::size_t mark = store.mark();
    std::vector<std::pair<TermPtr, TermPtr>> work{{a, b}};
    while (!work.empty()) {
        auto [x0, y0] = std::move(work.back());
        work.pop_back();
        const TermPtr& x = store.shallow_deref(x0);
        const TermPtr& y = store.shallow_deref(y0);
        if (x.get() == y.get())
            continue;
        if (x->is_var()) {
            if (!bind_var(x, y, store, occurs_check)) {
                store.undo_to(mark);
                return false;
            }
            continue;
        }
        if (y->is_var()) {
            if (!bind_var(y, x, store, occurs_check)) {
                store.undo_to(mark);
                return false;
            }
            continue;
        }
        bool ok;
        switch (x->tag) {
        case Term::Tag::Atom:
            ok = y->is_atom() && x->text == y->text;
            break;
        case Term::Tag::Int:
            ok = y->is_int() && x->ival == y->ival;
            break;
        case Term::Tag::Float:
            ok = y->is_float() && x->fval == y->fval;
            break;
        case Term::Tag::Compound:
            ok = y->is_compound() && x->text == y->text &&
                 x->args.size() == y->args.size();
            if (ok)
                for (std::size_t i = 0; i < x->args.size(); ++i)
                    work.emplace_back(x->args[i], y->args[i]);
            break;
        default:
            ok = false;
        }
        if (!ok) {
            store.undo_to(mark);
            return false;
        }
    }
    return true;
}

bool equal_under(const TermPtr& a, const TermPtr& b, const BindingStore& store) {
    std::vector<std::pair<TermPtr, TermPtr>> work{{a, b}};
    while (!work.empty()) {
        auto [x0, y0] = std::move(work.back());
        work.pop_back();
        const TermPtr& x = store.shallow_deref(x0);
        const TermPtr& y = store.shallow_deref(y0);
        if (x.get() == y.get())
            continue;
        if (x->tag != y->tag)
            return false;
        switch (x->tag) {
        case Term::Tag::Atom:
            if (x->text != y->text)
                return false;
            break;
        case Term::Tag::Var:
            if (x->var_id != y->var_id)
                return false;
            break;
        case Term::Tag::Int:
            if (x->ival != y->ival)
                return false;
            break;
        case Term::Tag::Float:
            if (x->fval != y->fval)
                return false;
            break;
        case Term::Tag::Compound:
            if (x->text != y->text || x->args.size() != y->args.size())
                return false;
            for (std::size_t i = 0; i < x->args.size(); ++i)
                work.emplace_back(x->args[i], y->args[i]);
            break;
        }
    }
    return true;
}

TermPtr deep_transform(const TermPtr& t, const BindingStore* store,
                       const std::function<TermPtr(const TermPtr&)>& var_fn) {
    struct Item {
        TermPtr node;     // already dereferenced
        std::size_t next; // next arg to visit; == arity means build
    };

    auto deref = [&](const TermPtr& x) -> const TermPtr& {
        return store ? store->shallow_deref(x) : x;
    };

    std::vector<Item> stack;
    std::vector<TermPtr> results;

    auto push = [&](const TermPtr& raw) {
        const TermPtr& node = deref(raw);
        if (node->is_var())
            results.push_back(var_fn(node));
        else if (!node->is_compound())
            results.push_back(node);
        else
            stack.push_back({node, 0});
    };

    push(t);
    while (!stack.empty()) {
        Item& top = stack.back();
        if (top.next < top.node->args.size()) {
            push(top.node->args[top.next++]);
            continue;
        }
        std::size_t n = top.node->args.size();
        std::size_t base = results.size() - n;
        bool unchanged = true;
        for (std::size_t i = 0; i < n; ++i)
            if (results[base + i].get() != top.node->args[i].get())
                unchanged = false;
        TermPtr built;
        if (unchanged) {
            built = top.node;
        } else {
            std::vector<TermPtr> args(results.begin() + base, results.end());
            built = make_compound(top.node->text, std::move(args));
        }
        results.resize(base);
        results.push_back(std::move(built));
        stack.pop_back();
    }
    return results.front();
}

std::optional<Substitution> unify(const TermPtr& a, const TermPtr& b,
                                  const Substitution& s, bool occurs_check) {
    BindingStore store;
    for (const auto& [id, value] : s)
        store.bind(id, value);
    if (!unify(a, b, store, occurs_check))
        return std::nullopt;
    return store.bindings();
}

TermPtr apply_substitution(const TermPtr& t, const Substitution& s) {
    BindingStore store;
    for (const auto& [id, value] : s)
        store.bind(id, value);
    return store.resolve(t);
}

} // namespace psp::prolog
