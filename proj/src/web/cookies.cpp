#include "psp/web/cookies.hpp"

#include "psp/prolog/term.hpp"

namespace psp::web {

namespace {

using namespace prolog;

// Names and values: no blanks, separators, or control bytes.
bool bad_name_value(const std::string& s) {
    for (unsigned char c : s)
        if (c <= 0x20 || c == 0x7F || c == ';' || c == ',')
            return true;
    return false;
}

// Attribute values share the header line: spaces and the date format's
// comma are fine, but a ';' or control byte would change its structure.
bool bad_attribute(const std::string& s) {
    for (unsigned char c : s)
        if (c < 0x20 || c == 0x7F || c == ';')
            return true;
    return false;
}

} // namespace

std::optional<std::string> cookie_problem(const CookieSpec& spec) {
    if (spec.name.empty())
        return "cookie name is empty";
    if (spec.name.find('=') != std::string::npos)
        return "cookie name contains '='";
    if (bad_name_value(spec.name))
        return "cookie name contains a separator or control byte";
    if (bad_name_value(spec.value))
        return "cookie value contains a separator or control byte";
    for (const std::string* attr : {&spec.expires, &spec.domain, &spec.path})
        if (bad_attribute(*attr))
            return "cookie attribute contains a separator or control byte";
    return std::nullopt;
}

std::string format_set_cookie(const CookieSpec& spec) {
    std::string out = spec.name + "=" + spec.value;
    if (!spec.expires.empty())
        out += "; expires=" + spec.expires;
    if (!spec.domain.empty())
        out += "; domain=" + spec.domain;
    if (!spec.path.empty())
        out += "; path=" + spec.path;
    if (spec.secure)
        out += "; secure";
    return out;
}

void register_setcookie(prolog::ExtraBuiltins& extras, ResponseEffects& fx) {
    extras[PredKey{"setcookie", 6}] =
        [&fx](const std::vector<TermPtr>& args) -> ExtraOutcome {
        for (const TermPtr& a : args) {
            if (a->is_var())
                return {ExtraOutcome::Kind::Error,
                        EngineError{ErrorKind::Instantiation, a}};
            if (!a->is_atom())
                return {ExtraOutcome::Kind::Error,
                        EngineError{ErrorKind::Type, a}};
        }
        CookieSpec spec;
        spec.name = args[0]->text;
        spec.value = args[1]->text;
        spec.expires = args[2]->text;
        spec.domain = args[3]->text;
        spec.path = args[4]->text;
        if (args[5]->text == "true") {
            spec.secure = true;
        } else if (args[5]->text == "false") {
            spec.secure = false;
        } else {
            return {ExtraOutcome::Kind::Error,
                    EngineError{ErrorKind::Type, args[5]}};
        }
        if (cookie_problem(spec))
            return {ExtraOutcome::Kind::Error,
                    EngineError{ErrorKind::Type, args[0]}};
        if (fx.output_started && *fx.output_started) {
            fx.notes.push_back("setcookie('" + spec.name +
                               "') ignored: page output already started");
            return {ExtraOutcome::Kind::Success, std::nullopt};
        }
        fx.cookies.push_back(std::move(spec));
        return {ExtraOutcome::Kind::Success, std::nullopt};
    };
}

} // namespace psp::web
