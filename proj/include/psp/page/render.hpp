#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "psp/page/document.hpp"
#include "psp/prolog/database.hpp"
#include "psp/prolog/solve.hpp"

namespace psp::page {

struct RenderOutcome {
    bool ok = true;
    std::string error;                     // why rendering aborted
    std::vector<std::string> diagnostics;  // non-fatal notes (failed goals,
                                           // unknown predicates)
};

// Everything a page render reads or writes. The database's session layer
// receives clauses defined by the page; budget and output_started are
// shared across all chunks (and with the caller, e.g. for cookie gating).
struct RenderContext {
    prolog::Database* db = nullptr;
    std::string* out = nullptr;
    bool* output_started = nullptr;          // optional
    std::uint64_t* budget = nullptr;         // optional; default 1'000'000
    bool occurs_check = true;
    const prolog::ExtraBuiltins* extras = nullptr;
};

// Runs the page: HTML is copied through, chunk clauses are asserted, chunk
// queries are solved for their first solution. A failed or unknown-predicate
// goal is recorded as a diagnostic and rendering continues; any other
// runtime error, the step limit, or a syntax error aborts.
RenderOutcome render_document(const std::vector<Segment>& segments,
                              RenderContext& ctx);

// segment_document + render_document with syntax errors folded into the
// outcome instead of thrown.
RenderOutcome render_text(const std::string& text, RenderContext& ctx);

} // namespace psp::page
