#pragma once

#include <string>
#include <vector>

#include "psp/prolog/errors.hpp"

namespace psp::page {

// A server page split into literal HTML runs and embedded code chunks.
// Reassembling the pieces (wrapping Code in "<?psp" / "?>") reproduces the
// source byte for byte.
struct Segment {
    enum class Kind { Html, Code };

    Kind kind;
    std::string text;        // Code: everything between the delimiters
    prolog::SourcePos pos;   // where the text starts in the page source
};

// Splits a page on "<?psp" ... "?>" delimiters. The first "?>" closes a
// chunk regardless of quoting inside. Throws SyntaxError when a chunk is
// never closed.
std::vector<Segment> segment_document(const std::string& text);

} // namespace psp::page
