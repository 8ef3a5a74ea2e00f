#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace psp::prolog {

struct SourcePos {
    std::uint32_t line = 1;
    std::uint32_t column = 1;
    bool operator==(const SourcePos&) const = default;
};

// Raised by the tokenizer and reader for malformed source text.
class SyntaxError : public std::runtime_error {
public:
    SyntaxError(SourcePos pos, const std::string& message)
        : std::runtime_error(message), pos_(pos) {}

    SourcePos pos() const { return pos_; }

private:
    SourcePos pos_;
};

// Runtime error categories surfaced through SolveOutcome.
enum class ErrorKind {
    Instantiation,
    Type,
    Existence,
    Arithmetic,
    Overflow,
};

std::string_view error_kind_name(ErrorKind kind);

} // namespace psp::prolog
