#include "psp/web/bindings.hpp"

namespace psp::web {

namespace {

using namespace prolog;

void assert_pairs(Database& db, const char* functor, const KvPairs& pairs) {
    for (const auto& [name, value] : pairs) {
        TermPtr head =
            make_compound(functor, {make_atom(name), make_atom(value)});
        db.assert_back(
            std::make_shared<Clause>(Clause{head, make_atom("true")}));
    }
}

} // namespace

void bind_request_facts(prolog::Database& db, const KvPairs& form_args,
                        const KvPairs& cookies) {
    assert_pairs(db, "arg", form_args);
    assert_pairs(db, "cookie", cookies);
}

} // namespace psp::web
