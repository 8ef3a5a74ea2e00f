#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace psp::http {

struct Request {
    std::string method;      // GET, HEAD, or POST once validated
    std::string target;      // raw request target as sent
    std::string path;        // target up to '?', still percent-encoded
    std::string query;       // after '?', raw ("" when absent)
    std::string version;     // e.g. HTTP/1.1
    std::vector<std::pair<std::string, std::string>> headers; // names lowered
    std::string body;

    // First header with the given lower-case name, or nullptr.
    const std::string* header(std::string_view lower_name) const;
};

struct Response {
    int status = 200;
    std::vector<std::pair<std::string, std::string>> headers;
    std::string body;
    bool head_only = false; // suppress the body bytes, keep Content-Length

    void set_header(std::string name, std::string value);
};

std::string_view reason_phrase(int status);

// Status line + headers + body. Content-Length and Connection: close are
// appended automatically.
std::string serialize(const Response& resp);

// A ready-made error response with a small html body.
Response error_response(int status, std::string_view detail = {});

} // namespace psp::http
