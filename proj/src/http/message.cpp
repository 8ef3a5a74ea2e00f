#include "psp/http/message.hpp"

namespace psp::http {

const std::string* Request::header(std::string_view lower_name) const {
    for (const auto& [name, value] : headers)
        if (name == lower_name)
            return &value;
    return nullptr;
}

void Response::set_header(std::string name, std::string value) {
    headers.emplace_back(std::move(name), std::move(value));
}

std::string_view reason_phrase(int status) {
    switch (status) {
    case 200: return "OK";
    case 400: return "Bad Request";
    case 403: return "Forbidden";
    case 404: return "Not Found";
    case 405: return "Method Not Allowed";
    case 411: return "Length Required";
    case 413: return "Content Too Large";
    case 415: return "Unsupported Media Type";
    case 431: return "Request Header Fields Too Large";
    case 500: return "Internal Server Error";
    default:  return "Status";
    }
}

std::string serialize(const Response& resp) {
    std::string out = "HTTP/1.1 " + std::to_string(resp.status) + " " +
                      std::string(reason_phrase(resp.status)) + "\r\n";
    for (const auto& [name, value] : resp.headers)
        out += name + ": " + value + "\r\n";
    out += "Content-Length: " + std::to_string(resp.body.size()) + "\r\n";
    out += "Connection: close\r\n\r\n";
    if (!resp.head_only)
        out += resp.body;
    return out;
}

namespace {

// Details can quote page text or request data, so escape them.
std::string html_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

} // namespace

Response error_response(int status, std::string_view detail) {
    Response resp;
    resp.status = status;
    resp.set_header("Content-Type", "text/html");
    resp.body = "<html><body><h1>" + std::to_string(status) + " " +
                std::string(reason_phrase(status)) + "</h1>";
    if (!detail.empty())
        resp.body += "<pre>" + html_escape(detail) + "</pre>";
    resp.body += "</body></html>\n";
    return resp;
}

} // namespace psp::http
