#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "psp/prolog/term.hpp"
#include "psp/prolog/token.hpp"

namespace psp::prolog {

// One element of a program: a clause to assert or a query to solve.
struct ProgramItem {
    enum class Kind { Clause, Query };

    Kind kind;
    TermPtr head;  // Clause only; always callable
    TermPtr body;  // Clause only; defaults to the atom true
    TermPtr goal;  // Query only
    SourcePos pos; // position of the item's first token
};

struct ParsedTerm {
    TermPtr term;
    std::size_t next; // index of the first unconsumed token
};

// Reads one term honoring the fixed operator table. Inside parentheses of a
// compound a comma separates arguments; elsewhere it is the 1000-priority
// conjunction operator. Throws SyntaxError.
ParsedTerm parse_term(std::span<const Token> tokens, std::size_t start,
                      int max_precedence);

// Pulls ProgramItems off a source text one end-dot at a time. Identically
// named variables in different items are distinct.
class ItemReader {
public:
    explicit ItemReader(std::string_view source, SourcePos origin = {1, 1});

    // nullopt at end of input; throws SyntaxError on malformed items.
    std::optional<ProgramItem> next();

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

} // namespace psp::prolog
