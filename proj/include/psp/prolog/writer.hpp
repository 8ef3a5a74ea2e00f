#pragma once

#include <string>

#include "psp/prolog/term.hpp"

namespace psp::prolog {

// Renders a term: operators infix with minimal parentheses, lists in
// [a,b|T] notation. Quoted mode single-quotes atoms that need it; unquoted
// mode prints atom text verbatim (the write/1 behavior).
std::string format_term(const TermPtr& t, bool quoted);

bool atom_needs_quotes(std::string_view name);

} // namespace psp::prolog
