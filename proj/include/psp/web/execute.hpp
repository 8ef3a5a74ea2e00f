#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "psp/page/document.hpp"
#include "psp/prolog/database.hpp"
#include "psp/web/cookies.hpp"
#include "psp/web/url.hpp"

namespace psp::web {

// One page execution: the segmented page plus everything request-specific.
// Both the server and the offline renderer funnel through execute_page, so
// the two agree byte for byte.
struct PageJob {
    const std::vector<page::Segment>* segments = nullptr;
    std::shared_ptr<const prolog::ClauseStore> base; // preludes; may be null
    KvPairs form;
    KvPairs cookies;
    std::uint64_t step_limit = 1'000'000;
    bool occurs_check = true;
};

struct PageResult {
    bool ok = false;
    std::string error;                 // why rendering aborted
    std::string body;
    std::vector<CookieSpec> cookies;   // Set-Cookie headers to emit
    std::vector<std::string> notes;    // diagnostics worth logging
};

PageResult execute_page(const PageJob& job);

} // namespace psp::web
