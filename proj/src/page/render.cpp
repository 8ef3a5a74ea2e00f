#include "psp/page/render.hpp"

#include "psp/prolog/parser.hpp"
#include "psp/prolog/writer.hpp"

namespace psp::page {

namespace {

using namespace prolog;

std::string loc(SourcePos pos) {
    return "line " + std::to_string(pos.line) + ", column " +
           std::to_string(pos.column);
}

// Executes one code chunk; returns false when rendering must stop.
bool run_chunk(const Segment& seg, RenderContext& ctx, bool* started,
               std::uint64_t* budget, RenderOutcome& out) {
    ItemReader reader(seg.text, seg.pos);
    while (auto item = reader.next()) {
        if (item->kind == ProgramItem::Kind::Clause) {
            PredKey key = pred_key(*item->head);
            if (is_builtin_predicate(key) ||
                (ctx.extras && ctx.extras->contains(key))) {
                out.ok = false;
                out.error = loc(item->pos) +
                            ": cannot redefine built-in predicate " +
                            key.name + "/" + std::to_string(key.arity);
                return false;
            }
            ctx.db->assert_back(
                std::make_shared<Clause>(Clause{item->head, item->body}));
            continue;
        }
        SolveContext sctx;
        sctx.sink = ctx.out;
        sctx.output_started = started;
        sctx.budget = budget;
        sctx.occurs_check = ctx.occurs_check;
        sctx.extras = ctx.extras;
        SolveOutcome solved = solve(item->goal, *ctx.db, sctx);
        switch (solved.kind) {
        case SolveOutcome::Kind::Success:
            break;
        case SolveOutcome::Kind::Failure:
            out.diagnostics.push_back(loc(item->pos) + ": goal failed: " +
                                      format_term(item->goal, true));
            break;
        case SolveOutcome::Kind::BudgetExceeded:
            out.ok = false;
            out.error = loc(item->pos) + ": step limit exceeded in goal: " +
                        format_term(item->goal, true);
            return false;
        case SolveOutcome::Kind::Error: {
            const EngineError& err = *solved.error;
            if (err.kind == ErrorKind::Existence) {
                std::string culprit =
                    err.culprit ? format_term(err.culprit, true) : "?";
                out.diagnostics.push_back(
                    loc(item->pos) + ": unknown predicate " + culprit +
                    ", goal failed: " + format_term(item->goal, true));
                break;
            }
            out.ok = false;
            out.error = loc(item->pos) + ": " +
                        std::string(error_kind_name(err.kind)) +
                        " error in goal: " + format_term(item->goal, true);
            if (err.culprit)
                out.error += " (culprit: " + format_term(err.culprit, true) + ")";
            return false;
        }
        }
    }
    return true;
}

} // namespace

RenderOutcome render_document(const std::vector<Segment>& segments,
                              RenderContext& ctx) {
    RenderOutcome out;
    bool local_started = false;
    std::uint64_t local_budget = 1'000'000;
    bool* started = ctx.output_started ? ctx.output_started : &local_started;
    std::uint64_t* budget = ctx.budget ? ctx.budget : &local_budget;
    for (const Segment& seg : segments) {
        if (seg.kind == Segment::Kind::Html) {
            *ctx.out += seg.text;
            continue;
        }
        try {
            if (!run_chunk(seg, ctx, started, budget, out))
                return out;
        } catch (const prolog::SyntaxError& e) {
            out.ok = false;
            out.error = loc(e.pos()) + ": " + e.what();
            return out;
        }
    }
    return out;
}

RenderOutcome render_text(const std::string& text, RenderContext& ctx) {
    std::vector<Segment> segments;
    try {
        segments = segment_document(text);
    } catch (const prolog::SyntaxError& e) {
        RenderOutcome out;
        out.ok = false;
        out.error = loc(e.pos()) + ": " + e.what();
        return out;
    }
    return render_document(segments, ctx);
}

} // namespace psp::page
