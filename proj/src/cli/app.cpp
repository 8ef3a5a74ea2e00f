#include "psp/cli/app.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "psp/page/document.hpp"
#include "psp/prolog/parser.hpp"
#include "psp/prolog/solve.hpp"
#include "psp/prolog/writer.hpp"
#include "psp/web/execute.hpp"

namespace psp::cli {

namespace {

using namespace prolog;

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return false;
    std::ostringstream text;
    text << in.rdbuf();
    out = text.str();
    return true;
}

} // namespace

std::optional<std::string>
load_preludes(const std::vector<std::string>& paths, std::uint64_t step_limit,
              bool occurs_check,
              std::shared_ptr<const prolog::ClauseStore>& out,
              std::string* query_output) {
    Database db;
    for (const std::string& path : paths) {
        std::string source;
        if (!read_file(path, source))
            return "cannot read prelude: " + path;
        auto fail = [&](const std::string& why) {
            return path + ": " + why;
        };
        try {
            ItemReader reader(source);
            while (auto item = reader.next()) {
                if (item->kind == ProgramItem::Kind::Clause) {
                    PredKey key = pred_key(*item->head);
                    if (is_builtin_predicate(key) ||
                        key == PredKey{"setcookie", 6})
                        return fail("cannot redefine built-in predicate " +
                                    key.name + "/" +
                                    std::to_string(key.arity));
                    db.assert_back(std::make_shared<Clause>(
                        Clause{item->head, item->body}));
                    continue;
                }
                std::uint64_t budget = step_limit;
                SolveContext ctx;
                ctx.sink = query_output;
                ctx.budget = &budget;
                ctx.occurs_check = occurs_check;
                SolveOutcome solved = solve(item->goal, db, ctx);
                std::string where = "line " + std::to_string(item->pos.line);
                switch (solved.kind) {
                case SolveOutcome::Kind::Success:
                    break;
                case SolveOutcome::Kind::Failure:
                    return fail(where + ": startup goal failed: " +
                                format_term(item->goal, true));
                case SolveOutcome::Kind::BudgetExceeded:
                    return fail(where + ": startup goal exceeded the step "
                                        "limit: " +
                                format_term(item->goal, true));
                case SolveOutcome::Kind::Error:
                    return fail(
                        where + ": " +
                        std::string(error_kind_name(solved.error->kind)) +
                        " error in startup goal: " +
                        format_term(item->goal, true));
                }
            }
        } catch (const SyntaxError& e) {
            return fail("line " + std::to_string(e.pos().line) + ", column " +
                        std::to_string(e.pos().column) + ": " + e.what());
        }
    }
    out = std::make_shared<const ClauseStore>(std::move(db.request_layer()));
    return std::nullopt;
}

int render_once(const AppConfig& config,
                std::shared_ptr<const prolog::ClauseStore> base,
                const RenderRequest& request, std::ostream& body_out,
                std::ostream& meta_out) {
    std::string source;
    if (!read_file(request.file, source)) {
        meta_out << "error: cannot read " << request.file << '\n';
        return 1;
    }
    std::vector<page::Segment> segments;
    try {
        segments = page::segment_document(source);
    } catch (const SyntaxError& e) {
        meta_out << "error: " << request.file << " line " << e.pos().line
                 << ", column " << e.pos().column << ": " << e.what() << '\n';
        return 1;
    }

    web::PageJob job;
    job.segments = &segments;
    job.base = std::move(base);
    job.form = request.form;
    job.cookies = request.cookies;
    job.step_limit = config.server.step_limit;
    job.occurs_check = config.server.occurs_check;
    web::PageResult result = web::execute_page(job);

    for (const std::string& note : result.notes)
        meta_out << "note: " << note << '\n';
    if (!result.ok) {
        meta_out << "error: " << request.file << ": " << result.error << '\n';
        return 1;
    }
    meta_out << "Content-Type: text/html\n";
    for (const web::CookieSpec& cookie : result.cookies)
        meta_out << "Set-Cookie: " << web::format_set_cookie(cookie) << '\n';
    body_out << result.body;
    return 0;
}

} // namespace psp::cli
