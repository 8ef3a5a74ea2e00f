#pragma once

#include <string>
#include <vector>

#include "psp/prolog/errors.hpp"

namespace psp::prolog {

struct Token {
    enum class Kind {
        Atom,     // unquoted, quoted, or solo-char atom
        Operator, // atom whose text is in the operator table
        Var,
        Int,      // unsigned digit run; value conversion happens in the parser
        Float,
        Punct,    // one of ( ) [ ] , | and the functor dot of '.('
        Query,    // ?-
        Neck,     // :-
        EndDot,   // clause-terminating dot
    };

    Kind kind;
    std::string text;
    SourcePos pos;
};

// Lexes the whole source. A dot followed by layout or end of input is an
// EndDot; % and /* */ comments are skipped; quoted atoms keep interior
// bytes with '' as the escaped quote. Throws SyntaxError.
std::vector<Token> tokenize(std::string_view source, SourcePos origin = {1, 1});

// Validates UTF-8 (rejecting overlong forms and surrogates) and reports the
// byte offset of the first bad sequence.
bool valid_utf8(std::string_view s, std::size_t& bad_at);

} // namespace psp::prolog
