#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace psp::prolog {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// The universal Prolog value. Compounds always have arity >= 1; a
// zero-arity callable is an Atom. Lists are '.'(Head, Tail) chains
// terminated by the atom [].
struct Term {
    enum class Tag { Atom, Var, Int, Float, Compound };

    Tag tag;
    std::string text;          // atom name, variable name, or functor
    std::uint64_t var_id = 0;  // valid for Var
    std::int64_t ival = 0;     // valid for Int
    double fval = 0.0;         // valid for Float
    std::vector<TermPtr> args; // valid for Compound

    // Drains deeply nested sole-owned children iteratively so that
    // destroying a long cons chain cannot overflow the C++ stack.
    ~Term();

    bool is_atom() const { return tag == Tag::Atom; }
    bool is_var() const { return tag == Tag::Var; }
    bool is_int() const { return tag == Tag::Int; }
    bool is_float() const { return tag == Tag::Float; }
    bool is_compound() const { return tag == Tag::Compound; }
    bool is_number() const { return is_int() || is_float(); }
    bool is_callable() const { return is_atom() || is_compound(); }

    std::size_t arity() const { return is_compound() ? args.size() : 0; }
};

TermPtr make_atom(std::string name);
TermPtr make_var(std::string name, std::uint64_t id);
TermPtr make_int(std::int64_t value);
TermPtr make_float(double value);
TermPtr make_compound(std::string functor, std::vector<TermPtr> args);

// Shared constants for the handful of atoms the engine itself spells.
const TermPtr& atom_nil();   // []
const TermPtr& atom_true();
const TermPtr& atom_fail();

TermPtr make_cons(TermPtr head, TermPtr tail);
TermPtr make_list(const std::vector<TermPtr>& items, TermPtr tail = nullptr);

bool is_cons(const Term& t);
bool is_nil(const Term& t);

// Exact structural equality; variables compare by id.
bool structural_equal(const TermPtr& a, const TermPtr& b);

// Predicate key: functor name plus arity (atoms have arity 0).
struct PredKey {
    std::string name;
    std::size_t arity = 0;
    bool operator==(const PredKey&) const = default;
};

struct PredKeyHash {
    std::size_t operator()(const PredKey& k) const {
        return std::hash<std::string>{}(k.name) * 31u + k.arity;
    }
};

PredKey pred_key(const Term& callable);

// Collects each distinct variable of t in first-occurrence order.
std::vector<TermPtr> term_vars(const TermPtr& t);

} // namespace psp::prolog
