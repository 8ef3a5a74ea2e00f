#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>

#include "psp/prolog/database.hpp"
#include "psp/prolog/errors.hpp"
#include "psp/prolog/term.hpp"
#include "psp/prolog/unify.hpp"

namespace psp::prolog {

struct EngineError {
    ErrorKind kind;
    TermPtr culprit; // the offending goal or subterm
};

struct SolveOutcome {
    enum class Kind { Success, Failure, BudgetExceeded, Error };

    Kind kind = Kind::Failure;
    Substitution bindings; // Success only: goal variable id -> resolved term
    std::optional<EngineError> error;

    bool ok() const { return kind == Kind::Success; }
};

// Host-registered builtins (the web layer adds setcookie/6). Arguments
// arrive fully resolved under the current bindings.
struct ExtraOutcome {
    enum class Kind { Success, Failure, Error };
    Kind kind = Kind::Success;
    std::optional<EngineError> error;
};

using ExtraBuiltin = std::function<ExtraOutcome(const std::vector<TermPtr>& args)>;
using ExtraBuiltins = std::unordered_map<PredKey, ExtraBuiltin, PredKeyHash>;

struct SolveContext {
    std::string* sink = nullptr;    // write/1 and nl/0 output; optional
    bool* output_started = nullptr; // flipped on the first sink byte; optional
    std::uint64_t* budget = nullptr; // required; each step decrements it
    bool occurs_check = true;
    const ExtraBuiltins* extras = nullptr;
};

bool is_builtin_predicate(const PredKey& key);

// Depth-first SLD resolution with chronological backtracking, stopping at
// the first solution. Side effects (sink output, asserts) survive
// backtracking. The machine is iterative: runaway programs exhaust the
// budget instead of the C++ stack.
SolveOutcome solve(const TermPtr& goal, Database& db, SolveContext& ctx);

// Convenience wrapper with a local budget, used by tests and tools.
SolveOutcome solve(const TermPtr& goal, Database& db, std::uint64_t budget,
                   std::string* sink = nullptr);

} // namespace psp::prolog
