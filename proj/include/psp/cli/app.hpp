#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "psp/cli/config.hpp"
#include "psp/prolog/database.hpp"
#include "psp/web/url.hpp"

namespace psp::cli {

// Loads prelude programs into one shared clause store. Clauses accumulate
// across files in order; queries run as they are met (their write/1 output
// goes to *query_output). Any syntax error, failed or erroneous query, or
// exhausted step budget makes startup fail.
std::optional<std::string>
load_preludes(const std::vector<std::string>& paths, std::uint64_t step_limit,
              bool occurs_check,
              std::shared_ptr<const prolog::ClauseStore>& out,
              std::string* query_output = nullptr);

struct RenderRequest {
    std::string file;
    web::KvPairs form;
    web::KvPairs cookies;
};

// Renders one page exactly as the server would: the body goes to body_out,
// the response headers (Content-Type, Set-Cookie) to meta_out. Returns the
// process exit code: 0 rendered, 1 the page aborted or cannot be read.
int render_once(const AppConfig& config,
                std::shared_ptr<const prolog::ClauseStore> base,
                const RenderRequest& request, std::ostream& body_out,
                std::ostream& meta_out);

} // namespace psp::cli
