#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psp/prolog/solve.hpp"

namespace psp::web {

// One Set-Cookie header in the making. Empty expires/domain/path are
// omitted from the formatted header.
struct CookieSpec {
    std::string name;
    std::string value;
    std::string expires;
    std::string domain;
    std::string path;
    bool secure = false;
};

// Returns a problem description, or nullopt when the spec is sendable.
// Names and values must be free of ';', ',', whitespace, and control
// bytes; '=' is additionally forbidden in the name, and the name must be
// nonempty.
std::optional<std::string> cookie_problem(const CookieSpec& spec);

std::string format_set_cookie(const CookieSpec& spec);

// Cookies and notes produced while a page renders. `output_started`
// points at the render flag: once any Prolog goal has written output the
// headers are already spoken for, so later setcookie calls are ignored
// with a note.
struct ResponseEffects {
    std::vector<CookieSpec> cookies;
    std::vector<std::string> notes;
    const bool* output_started = nullptr;
};

// Registers setcookie(Name, Value, Expires, Domain, Path, Secure) — six
// atoms, Secure being true or false — into `extras`. `fx` must outlive any
// solve call using the registry.
void register_setcookie(prolog::ExtraBuiltins& extras, ResponseEffects& fx);

} // namespace psp::web
