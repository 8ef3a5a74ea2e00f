#include "psp/web/url.hpp"

#include "psp/prolog/token.hpp"

namespace psp::web {

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

} // namespace

std::string percent_decode(std::string_view text, bool plus_as_space) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '+' && plus_as_space) {
            out.push_back(' ');
        } else if (c == '%') {
            if (i + 2 >= text.size() || hex_value(text[i + 1]) < 0 ||
                hex_value(text[i + 2]) < 0)
                throw DecodeError("truncated or non-hex percent escape at offset " +
                                  std::to_string(i));
            out.push_back(static_cast<char>(hex_value(text[i + 1]) * 16 +
                                            hex_value(text[i + 2])));
            i += 2;
        } else {
            out.push_back(c);
        }
    }
    std::size_t bad_at = 0;
    if (!prolog::valid_utf8(out, bad_at))
        throw DecodeError("decoded text is not valid UTF-8 (byte " +
                          std::to_string(bad_at) + ")");
    return out;
}

KvPairs decode_form(std::string_view body) {
    KvPairs pairs;
    std::size_t at = 0;
    std::size_t index = 0;
    while (at <= body.size()) {
        std::size_t amp = body.find('&', at);
        std::string_view seg = body.substr(
            at, amp == std::string_view::npos ? std::string_view::npos
                                              : amp - at);
        if (!seg.empty()) {
            std::size_t eq = seg.find('=');
            if (eq == std::string_view::npos)
                throw DecodeError("form field " + std::to_string(index) +
                                  " has no '='");
            pairs.emplace_back(percent_decode(seg.substr(0, eq), true),
                               percent_decode(seg.substr(eq + 1), true));
            ++index;
        }
        if (amp == std::string_view::npos)
            break;
        at = amp + 1;
    }
    return pairs;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

} // namespace

KvPairs parse_cookie_header(std::string_view header,
                            std::vector<std::string>* notes) {
    KvPairs pairs;
    std::size_t at = 0;
    while (at <= header.size()) {
        std::size_t semi = header.find(';', at);
        std::string_view seg = trim(header.substr(
            at, semi == std::string_view::npos ? std::string_view::npos
                                               : semi - at));
        if (!seg.empty()) {
            std::size_t eq = seg.find('=');
            if (eq == std::string_view::npos || eq == 0) {
                if (notes)
                    notes->push_back("ignored malformed cookie pair: " +
                                     std::string(seg));
            } else {
                pairs.emplace_back(std::string(trim(seg.substr(0, eq))),
                                   std::string(trim(seg.substr(eq + 1))));
            }
        }
        if (semi == std::string_view::npos)
            break;
        at = semi + 1;
    }
    return pairs;
}

} // namespace psp::web
