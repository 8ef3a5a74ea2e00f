#pragma once

#include "psp/prolog/database.hpp"
#include "psp/web/url.hpp"

namespace psp::web {

// Asserts the request as facts in the session layer: arg(Name, Value) for
// every form/query pair, then cookie(Name, Value) for every cookie, in wire
// order. Names and values are always atoms.
void bind_request_facts(prolog::Database& db, const KvPairs& form_args,
                        const KvPairs& cookies);

} // namespace psp::web
