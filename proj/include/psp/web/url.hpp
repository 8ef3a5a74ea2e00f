#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace psp::web {

// Malformed percent-encoding or form syntax.
class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Decodes %HH escapes (and '+' to space when plus_as_space). The decoded
// bytes must be valid UTF-8; anything else throws DecodeError.
std::string percent_decode(std::string_view text, bool plus_as_space);

using KvPairs = std::vector<std::pair<std::string, std::string>>;

// Decodes an application/x-www-form-urlencoded payload (also used for URL
// query strings). Empty segments between '&' are skipped; a segment with no
// '=' throws DecodeError.
KvPairs decode_form(std::string_view body);

// Splits a Cookie: header on ';', trimming blanks around each pair. Cookie
// values are opaque: no percent-decoding. Segments without '=' or with an
// empty name are skipped; when `notes` is given each skip is recorded.
KvPairs parse_cookie_header(std::string_view header,
                            std::vector<std::string>* notes = nullptr);

} // namespace psp::web
