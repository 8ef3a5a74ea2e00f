#include "psp/web/execute.hpp"

#include "psp/page/render.hpp"
#include "psp/web/bindings.hpp"

namespace psp::web {

PageResult execute_page(const PageJob& job) {
    prolog::Database session(job.base);
    bind_request_facts(session, job.form, job.cookies);

    PageResult result;
    ResponseEffects fx;
    bool output_started = false;
    fx.output_started = &output_started;
    prolog::ExtraBuiltins extras;
    register_setcookie(extras, fx);

    std::uint64_t budget = job.step_limit;
    page::RenderContext ctx;
    ctx.db = &session;
    ctx.out = &result.body;
    ctx.output_started = &output_started;
    ctx.budget = &budget;
    ctx.occurs_check = job.occurs_check;
    ctx.extras = &extras;

    page::RenderOutcome rendered = page::render_document(*job.segments, ctx);
    result.ok = rendered.ok;
    result.error = rendered.error;
    result.cookies = std::move(fx.cookies);
    result.notes = std::move(rendered.diagnostics);
    result.notes.insert(result.notes.end(), fx.notes.begin(), fx.notes.end());
    return result;
}

} // namespace psp::web
