#pragma once

#include <cstddef>
#include <string>

#include "psp/http/message.hpp"

namespace psp::http {

// Where request bytes come from: a socket in production, a string in tests.
class ByteSource {
public:
    virtual ~ByteSource() = default;
    // Up to `len` bytes into `buf`; 0 on orderly close, -1 on error/timeout.
    virtual long read_some(char* buf, std::size_t len) = 0;
};

class StringSource : public ByteSource {
public:
    explicit StringSource(std::string data) : data_(std::move(data)) {}
    long read_some(char* buf, std::size_t len) override;

private:
    std::string data_;
    std::size_t at_ = 0;
};

struct ParseLimits {
    std::size_t max_line = 8192;     // request line and each header line
    std::size_t max_headers = 100;
    std::size_t max_body = 1 << 20;
};

// 0 on success; otherwise the HTTP status to answer with (400, 405, 411,
// 413, or 431).
int parse_request(ByteSource& source, const ParseLimits& limits,
                  Request& out);

} // namespace psp::http
