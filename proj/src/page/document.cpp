#include "psp/page/document.hpp"

namespace psp::page {

namespace {

constexpr std::string_view kOpen = "<?psp";
constexpr std::string_view kClose = "?>";

void advance_pos(prolog::SourcePos& pos, std::string_view consumed) {
    for (char c : consumed) {
        if (c == '\n') {
            ++pos.line;
            pos.column = 1;
        } else {
            ++pos.column;
        }
    }
}

} // namespace

std::vector<Segment> segment_document(const std::string& text) {
    std::vector<Segment> segments;
    prolog::SourcePos pos;
    std::size_t at = 0;
    while (at < text.size()) {
        std::size_t open = text.find(kOpen, at);
        if (open == std::string::npos) {
            segments.push_back(
                {Segment::Kind::Html, text.substr(at), pos});
            return segments;
        }
        if (open > at) {
            std::string html = text.substr(at, open - at);
            segments.push_back({Segment::Kind::Html, html, pos});
            advance_pos(pos, html);
        }
        prolog::SourcePos open_pos = pos;
        advance_pos(pos, kOpen);
        std::size_t code_start = open + kOpen.size();
        std::size_t close = text.find(kClose, code_start);
        if (close == std::string::npos)
            throw prolog::SyntaxError(open_pos, "unterminated <?psp chunk");
        std::string code = text.substr(code_start, close - code_start);
        segments.push_back({Segment::Kind::Code, code, pos});
        advance_pos(pos, code);
        advance_pos(pos, kClose);
        at = close + kClose.size();
    }
    return segments;
}

} // namespace psp::page
