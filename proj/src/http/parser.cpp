#include "psp/http/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace psp::http {

long StringSource::read_some(char* buf, std::size_t len) {
    std::size_t n = std::min(len, data_.size() - at_);
    std::copy_n(data_.data() + at_, n, buf);
    at_ += n;
    return static_cast<long>(n);
}

namespace {

class BufferedReader {
public:
    explicit BufferedReader(ByteSource& source) : source_(source) {}

    enum class Line { Ok, TooLong, Closed };

    Line read_line(std::size_t max_len, std::string& line) {
        for (;;) {
            std::size_t nl = buf_.find('\n', pos_);
            if (nl != std::string::npos) {
                if (nl - pos_ > max_len)
                    return Line::TooLong;
                line.assign(buf_, pos_, nl - pos_);
                if (!line.empty() && line.back() == '\r')
                    line.pop_back();
                pos_ = nl + 1;
                compact();
                return Line::Ok;
            }
            if (buf_.size() - pos_ > max_len)
                return Line::TooLong;
            if (!fill())
                return Line::Closed;
        }
    }

    bool read_exact(std::size_t n, std::string& out) {
        while (buf_.size() - pos_ < n)
            if (!fill())
                return false;
        out.assign(buf_, pos_, n);
        pos_ += n;
        compact();
        return true;
    }

private:
    bool fill() {
        char chunk[4096];
        long n = source_.read_some(chunk, sizeof chunk);
        if (n <= 0)
            return false;
        buf_.append(chunk, static_cast<std::size_t>(n));
        return true;
    }

    void compact() {
        if (pos_ > 65536) {
            buf_.erase(0, pos_);
            pos_ = 0;
        }
    }

    ByteSource& source_;
    std::string buf_;
    std::size_t pos_ = 0;
};

std::string to_lower(std::string s) {
    for (char& c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string_view trim_ows(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

int parse_request_line(const std::string& line, Request& out) {
    std::size_t sp1 = line.find(' ');
    std::size_t sp2 = line.rfind(' ');
    if (sp1 == std::string::npos || sp2 == sp1)
        return 400;
    out.method = line.substr(0, sp1);
    out.target = line.substr(sp1 + 1, sp2 - sp1 - 1);
    out.version = line.substr(sp2 + 1);
    if (out.target.empty() || out.target.find(' ') != std::string::npos)
        return 400;
    if (out.version != "HTTP/1.1" && out.version != "HTTP/1.0")
        return 400;
    if (out.method != "GET" && out.method != "HEAD" && out.method != "POST") {
        // a token that isn't even a plausible method is a malformed request
        bool token = !out.method.empty() &&
                     std::all_of(out.method.begin(), out.method.end(),
                                 [](unsigned char c) {
                                     return std::isalpha(c) != 0;
                                 });
        return token ? 405 : 400;
    }
    if (out.target[0] != '/')
        return 400;
    std::size_t q = out.target.find('?');
    out.path = out.target.substr(0, q);
    out.query = q == std::string::npos ? "" : out.target.substr(q + 1);
    return 0;
}

} // namespace

int parse_request(ByteSource& source, const ParseLimits& limits,
                  Request& out) {
    BufferedReader reader(source);
    std::string line;

    // tolerate a few stray blank lines before the request line
    for (int blank = 0;; ++blank) {
        switch (reader.read_line(limits.max_line, line)) {
        case BufferedReader::Line::TooLong: return 431;
        case BufferedReader::Line::Closed: return 400;
        case BufferedReader::Line::Ok: break;
        }
        if (!line.empty())
            break;
        if (blank >= 4)
            return 400;
    }
    if (int status = parse_request_line(line, out))
        return status;

    for (;;) {
        switch (reader.read_line(limits.max_line, line)) {
        case BufferedReader::Line::TooLong: return 431;
        case BufferedReader::Line::Closed: return 400;
        case BufferedReader::Line::Ok: break;
        }
        if (line.empty())
            break;
        if (out.headers.size() >= limits.max_headers)
            return 431;
        std::size_t colon = line.find(':');
        if (colon == std::string::npos || colon == 0)
            return 400;
        std::string name = line.substr(0, colon);
        if (name.find(' ') != std::string::npos ||
            name.find('\t') != std::string::npos)
            return 400;
        out.headers.emplace_back(
            to_lower(std::move(name)),
            std::string(trim_ows(std::string_view(line).substr(colon + 1))));
    }

    if (out.header("transfer-encoding"))
        return 411; // only Content-Length framing is supported

    const std::string* content_length = out.header("content-length");
    if (!content_length) {
        if (out.method == "POST")
            return 411;
        return 0;
    }
    for (const auto& [name, value] : out.headers)
        if (name == "content-length" && value != *content_length)
            return 400; // conflicting lengths
    std::uint64_t length = 0;
    const char* first = content_length->data();
    const char* last = first + content_length->size();
    auto [end, ec] = std::from_chars(first, last, length);
    if (ec != std::errc() || end != last)
        return 400;
    if (length > limits.max_body)
        return 413;
    if (length > 0 && !reader.read_exact(static_cast<std::size_t>(length),
                                         out.body))
        return 400;
    return 0;
}

} // namespace psp::http
