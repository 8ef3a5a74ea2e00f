#include "psp/prolog/token.hpp"

#include <cctype>

#include "psp/prolog/ops.hpp"

namespace psp::prolog {

// Validates UTF-8 and reports the byte offset of the first bad sequence.
bool valid_utf8(std::string_view s, std::size_t& bad_at) {
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char b = static_cast<unsigned char>(s[i]);
        std::size_t len;
        std::uint32_t cp;
        if (b < 0x80) {
            i += 1;
            continue;
        } else if ((b & 0xE0) == 0xC0) {
            len = 2;
            cp = b & 0x1F;
        } else if ((b & 0xF0) == 0xE0) {
            len = 3;
            cp = b & 0x0F;
        } else if ((b & 0xF8) == 0xF0) {
            len = 4;
            cp = b & 0x07;
        } else {
            bad_at = i;
            return false;
        }
        if (i + len > s.size()) {
            bad_at = i;
            return false;
        }
        for (std::size_t k = 1; k < len; ++k) {
            unsigned char c = static_cast<unsigned char>(s[i + k]);
            if ((c & 0xC0) != 0x80) {
                bad_at = i;
                return false;
            }
            cp = (cp << 6) | (c & 0x3F);
        }
        static constexpr std::uint32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
        if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            bad_at = i;
            return false;
        }
        i += len;
    }
    return true;
}

namespace {

bool is_symbol_char(char c) {
    switch (c) {
    case '#': case '$': case '&': case '*': case '+': case '-':
    case '.': case '/': case ':': case '<': case '=': case '>':
    case '?': case '@': case '^': case '~': case '\\':
        return true;
    default:
        return false;
    }
}

bool is_alnum_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_layout(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

class Lexer {
public:
    Lexer(std::string_view src, SourcePos origin)
        : src_(src), line_(origin.line), col_(origin.column) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_layout_and_comments();
            if (at_end())
                break;
            out.push_back(next_token());
        }
        return out;
    }

private:
    std::string_view src_;
    std::size_t i_ = 0;
    std::uint32_t line_;
    std::uint32_t col_;

    bool at_end() const { return i_ >= src_.size(); }
    char peek(std::size_t ahead = 0) const {
        return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
    }
    SourcePos here() const { return {line_, col_}; }

    char advance() {
        char c = src_[i_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    [[noreturn]] void fail(SourcePos pos, const std::string& msg) {
        throw SyntaxError(pos, msg);
    }

    void skip_layout_and_comments() {
        for (;;) {
            if (at_end())
                return;
            char c = peek();
            if (is_layout(c)) {
                advance();
            } else if (c == '%') {
                while (!at_end() && peek() != '\n')
                    advance();
            } else if (c == '/' && peek(1) == '*') {
                SourcePos open = here();
                advance();
                advance();
                for (;;) {
                    if (at_end())
                        fail(open, "unterminated block comment");
                    if (peek() == '*' && peek(1) == '/') {
                        advance();
                        advance();
                        break;
                    }
                    advance();
                }
            } else {
                return;
            }
        }
    }

    Token make(Token::Kind kind, std::string text, SourcePos pos) {
        return Token{kind, std::move(text), pos};
    }

    Token next_token() {
        SourcePos pos = here();
        char c = peek();

        if (c == '(' || c == ')' || c == '[' || c == ']' || c == ',' || c == '|') {
            advance();
            return make(Token::Kind::Punct, std::string(1, c), pos);
        }
        if (c == '!') {
            advance();
            return make(Token::Kind::Atom, "!", pos);
        }
        if (c == ';') {
            advance();
            return make(Token::Kind::Operator, ";", pos);
        }
        if (c == '\'')
            return quoted_atom(pos, '\'');
        if (c == '"')
            return quoted_atom(pos, '"'); // double-quoted text reads as an atom
        if (std::isdigit(static_cast<unsigned char>(c)))
            return number(pos);
        if (std::islower(static_cast<unsigned char>(c)))
            return ident(pos);
        if (std::isupper(static_cast<unsigned char>(c)) || c == '_')
            return variable(pos);
        if (is_symbol_char(c))
            return symbolic(pos);

        fail(pos, "invalid character");
    }

    Token ident(SourcePos pos) {
        std::string text;
        while (!at_end() && is_alnum_char(peek()))
            text.push_back(advance());
        auto kind = is_operator_name(text) ? Token::Kind::Operator : Token::Kind::Atom;
        return make(kind, std::move(text), pos);
    }

    Token variable(SourcePos pos) {
        std::string text;
        while (!at_end() && is_alnum_char(peek()))
            text.push_back(advance());
        return make(Token::Kind::Var, std::move(text), pos);
    }

    Token number(SourcePos pos) {
        std::string text;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
            text.push_back(advance());
        // Fraction only when a digit follows the dot, so "1." stays Int + EndDot.
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            text.push_back(advance());
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
                text.push_back(advance());
            if (peek() == 'e' || peek() == 'E') {
                std::size_t expo = 1;
                if (peek(expo) == '+' || peek(expo) == '-')
                    ++expo;
                if (std::isdigit(static_cast<unsigned char>(peek(expo)))) {
                    while (expo-- > 0)
                        text.push_back(advance());
                    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
                        text.push_back(advance());
                }
            }
            return make(Token::Kind::Float, std::move(text), pos);
        }
        return make(Token::Kind::Int, std::move(text), pos);
    }

    Token quoted_atom(SourcePos pos, char quote) {
        advance();
        std::string text;
        for (;;) {
            if (at_end())
                fail(pos, "unterminated quoted atom");
            char c = advance();
            if (c == quote) {
                if (peek() == quote) {
                    text.push_back(quote); // doubled quote is a literal quote
                    advance();
                } else {
                    break;
                }
            } else {
                text.push_back(c);
            }
        }
        return make(Token::Kind::Atom, std::move(text), pos);
    }

    bool dot_ends_clause() const {
        return i_ + 1 >= src_.size() || is_layout(src_[i_ + 1]) || src_[i_ + 1] == '%';
    }

    Token symbolic(SourcePos pos) {
        if (peek() == '.' && dot_ends_clause()) {
            advance();
            return make(Token::Kind::EndDot, ".", pos);
        }
        if (peek() == '.' && peek(1) == '(') {
            advance();
            return make(Token::Kind::Punct, ".", pos); // functor dot of '.'(H,T)
        }
        std::string text;
        while (!at_end() && is_symbol_char(peek()))
            text.push_back(advance());
        if (text == "?-")
            return make(Token::Kind::Query, std::move(text), pos);
        if (text == ":-")
            return make(Token::Kind::Neck, std::move(text), pos);
        auto kind = is_operator_name(text) ? Token::Kind::Operator : Token::Kind::Atom;
        return make(kind, std::move(text), pos);
    }
};

} // namespace

std::vector<Token> tokenize(std::string_view source, SourcePos origin) {
    std::size_t bad_at = 0;
    if (!valid_utf8(source, bad_at)) {
        // Count lines up to the offending byte for a usable position.
        SourcePos pos = origin;
        for (std::size_t i = 0; i < bad_at; ++i) {
            if (source[i] == '\n') {
                ++pos.line;
                pos.column = 1;
            } else {
                ++pos.column;
            }
        }
        throw SyntaxError(pos, "source is not valid UTF-8");
    }
    return Lexer(source, origin).run();
}

} // namespace psp::prolog
