#include "psp/prolog/term.hpp"

#include <utility>

namespace psp::prolog {

Term::~Term() {
    // Releasing args element by element recurses once per nesting level,
    // which overflows the stack on very deep terms. Steal the children we
    // solely own and release them from an explicit worklist instead.
    bool risky = false;
    for (const TermPtr& child : args) {
        if (child && child.use_count() == 1 && !child->args.empty()) {
            risky = true;
            break;
        }
    }
    if (!risky)
        return;
    std::vector<std::vector<TermPtr>> pending;
    pending.push_back(std::move(args));
    while (!pending.empty()) {
        std::vector<TermPtr> batch = std::move(pending.back());
        pending.pop_back();
        for (TermPtr& child : batch) {
            if (child && child.use_count() == 1 && !child->args.empty())
                pending.push_back(std::move(const_cast<Term&>(*child).args));
        }
    }
}

TermPtr make_atom(std::string name) {
    auto t = std::make_shared<Term>();
    t->tag = Term::Tag::Atom;
    t->text = std::move(name);
    return t;
}

TermPtr make_var(std::string name, std::uint64_t id) {
    auto t = std::make_shared<Term>();
    t->tag = Term::Tag::Var;
    t->text = std::move(name);
    t->var_id = id;
    return t;
}

TermPtr make_int(std::int64_t value) {
    auto t = std::make_shared<Term>();
    t->tag = Term::Tag::Int;
    t->ival = value;
    return t;
}

TermPtr make_float(double value) {
    auto t = std::make_shared<Term>();
    t->tag = Term::Tag::Float;
    t->fval = value;
    return t;
}

TermPtr make_compound(std::string functor, std::vector<TermPtr> args) {
    auto t = std::make_shared<Term>();
    t->tag = Term::Tag::Compound;
    t->text = std::move(functor);
    t->args = std::move(args);
    return t;
}

const TermPtr& atom_nil() {
    static const TermPtr t = make_atom("[]");
    return t;
}

const TermPtr& atom_true() {
    static const TermPtr t = make_atom("true");
    return t;
}

const TermPtr& atom_fail() {
    static const TermPtr t = make_atom("fail");
    return t;
}

TermPtr make_cons(TermPtr head, TermPtr tail) {
    return make_compound(".", {std::move(head), std::move(tail)});
}

TermPtr make_list(const std::vector<TermPtr>& items, TermPtr tail) {
    TermPtr list = tail ? std::move(tail) : atom_nil();
    for (auto it = items.rbegin(); it != items.rend(); ++it)
        list = make_cons(*it, list);
    return list;
}

bool is_cons(const Term& t) {
    return t.is_compound() && t.args.size() == 2 && t.text == ".";
}

bool is_nil(const Term& t) {
    return t.is_atom() && t.text == "[]";
}

bool structural_equal(const TermPtr& a, const TermPtr& b) {
    std::vector<std::pair<const Term*, const Term*>> work{{a.get(), b.get()}};
    while (!work.empty()) {
        auto [x, y] = work.back();
        work.pop_back();
        if (x == y)
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
                work.emplace_back(x->args[i].get(), y->args[i].get());
            break;
        }
    }
    return true;
}

PredKey pred_key(const Term& callable) {
    return PredKey{callable.text, callable.arity()};
}

std::vector<TermPtr> term_vars(const TermPtr& t) {
    std::vector<TermPtr> out;
    std::vector<const TermPtr*> work{&t};
    auto seen = [&out](std::uint64_t id) {
        for (const auto& v : out)
            if (v->var_id == id)
                return true;
        return false;
    };
    while (!work.empty()) {
        const TermPtr& cur = *work.back();
        work.pop_back();
        if (cur->is_var()) {
            if (!seen(cur->var_id))
                out.push_back(cur);
        } else if (cur->is_compound()) {
            for (auto it = cur->args.rbegin(); it != cur->args.rend(); ++it)
                work.push_back(&*it);
        }
    }
    return out;
}

} // namespace psp::prolog
