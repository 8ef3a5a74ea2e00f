#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "psp/prolog/database.hpp"
#include "psp/prolog/parser.hpp"
#include "psp/prolog/solve.hpp"
#include "psp/prolog/term.hpp"
#include "psp/prolog/token.hpp"

namespace test_support {

using namespace psp::prolog;

// Parses a single term (no trailing dot required); the whole text must be
// one term.
inline TermPtr parse_one(const std::string& text) {
    std::vector<Token> tokens = tokenize(text);
    ParsedTerm parsed = parse_term(tokens, 0, 1200);
    if (parsed.next != tokens.size())
        throw std::runtime_error("trailing tokens after term: " + text);
    return parsed.term;
}

// Parses two terms in one shared variable scope, so `X` on the left and
// `Y` on the right get distinct ids (parse_one restarts ids per call).
inline std::pair<TermPtr, TermPtr> parse_pair(const std::string& left,
                                              const std::string& right) {
    TermPtr t = parse_one("pair((" + left + "), (" + right + "))");
    return {t->args[0], t->args[1]};
}

// Loads clauses into the database's session layer; queries are rejected.
inline void load_program(Database& db, const std::string& source) {
    ItemReader reader(source);
    while (auto item = reader.next()) {
        if (item->kind != ProgramItem::Kind::Clause)
            throw std::runtime_error("test program must contain clauses only");
        db.assert_back(std::make_shared<Clause>(Clause{item->head, item->body}));
    }
}

inline SolveOutcome run_goal(Database& db, const std::string& goal,
                             std::string* sink = nullptr,
                             std::uint64_t budget = 1'000'000) {
    return solve(parse_one(goal), db, budget, sink);
}

// Equality up to a bijective renaming of variables.
inline bool alpha_equal(const TermPtr& a, const TermPtr& b) {
    std::unordered_map<std::uint64_t, std::uint64_t> fwd, bwd;
    std::vector<std::pair<const Term*, const Term*>> work{{a.get(), b.get()}};
    while (!work.empty()) {
        auto [x, y] = work.back();
        work.pop_back();
        if (x->tag != y->tag)
            return false;
        switch (x->tag) {
        case Term::Tag::Atom:
            if (x->text != y->text)
                return false;
            break;
        case Term::Tag::Var: {
            auto f = fwd.find(x->var_id);
            auto g = bwd.find(y->var_id);
            if (f == fwd.end() && g == bwd.end()) {
                fwd.emplace(x->var_id, y->var_id);
                bwd.emplace(y->var_id, x->var_id);
            } else if (f == fwd.end() || g == bwd.end() ||
                       f->second != y->var_id || g->second != x->var_id) {
                return false;
            }
            break;
        }
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

// Random term generator for round-trip and unification properties.
class TermGen {
public:
    explicit TermGen(std::uint64_t seed) : rng_(seed) {}

    // Terms drawn from a small shared variable pool so that random pairs
    // have a realistic chance of unifying.
    TermPtr gen(int max_depth) {
        int pick = max_depth <= 0 ? static_cast<int>(rng_() % 4)
                                  : static_cast<int>(rng_() % 6);
        switch (pick) {
        case 0:
            return make_atom(kAtoms[rng_() % kAtoms.size()]);
        case 1: {
            std::uint64_t id = rng_() % 6;
            return make_var("V" + std::to_string(id), id);
        }
        case 2:
            return make_int(static_cast<std::int64_t>(rng_() % 2001) - 1000);
        case 3: {
            double v = (static_cast<double>(rng_() % 20001) - 10000.0) / 8.0;
            return make_float(v);
        }
        default: {
            std::size_t arity = 1 + rng_() % 3;
            std::vector<TermPtr> args;
            args.reserve(arity);
            for (std::size_t i = 0; i < arity; ++i)
                args.push_back(gen(max_depth - 1));
            return make_compound(kFunctors[rng_() % kFunctors.size()],
                                 std::move(args));
        }
        }
    }

    // Ground variant with distinct, freshly numbered variables instead of
    // the shared pool (round-trip tests need each name to denote one var).
    TermPtr gen_distinct_vars(int max_depth) {
        std::uint64_t counter = 0;
        return gen_dv(max_depth, counter);
    }

    std::mt19937_64& rng() { return rng_; }

private:
    TermPtr gen_dv(int max_depth, std::uint64_t& counter) {
        int pick = max_depth <= 0 ? static_cast<int>(rng_() % 4)
                                  : static_cast<int>(rng_() % 6);
        switch (pick) {
        case 0:
            return make_atom(kAtoms[rng_() % kAtoms.size()]);
        case 1: {
            std::uint64_t id = counter++;
            return make_var("V" + std::to_string(id), id);
        }
        case 2: {
            // span the full int range now and then
            if (rng_() % 16 == 0)
                return make_int(static_cast<std::int64_t>(rng_()));
            return make_int(static_cast<std::int64_t>(rng_() % 2001) - 1000);
        }
        case 3: {
            double v = (static_cast<double>(rng_() % 20001) - 10000.0) / 8.0;
            if (rng_() % 8 == 0)
                v *= 1e100;
            return make_float(v);
        }
        default: {
            std::size_t arity = 1 + rng_() % 3;
            std::vector<TermPtr> args;
            args.reserve(arity);
            for (std::size_t i = 0; i < arity; ++i)
                args.push_back(gen_dv(max_depth - 1, counter));
            return make_compound(kFunctors[rng_() % kFunctors.size()],
                                 std::move(args));
        }
        }
    }

    static inline const std::vector<std::string> kAtoms = {
        "a",  "b",    "foo",  "bar_baz", "[]",        "hello world",
        "+",  "mod",  "baz1", "'",       "Uppercase", "",
        "{}", "a b",  "ab%",  "1abc",
    };
    static inline const std::vector<std::string> kFunctors = {
        "f", "g", "point", "+", "-", "*", "mod", "edge", "a b",
    };

    std::mt19937_64 rng_;
};

} // namespace test_support
