#include "psp/prolog/parser.hpp"

#include <charconv>
#include <cstdlib>
#include <unordered_map>

#include "psp/prolog/ops.hpp"

namespace psp::prolog {

namespace {

constexpr int kMaxNesting = 10000;

bool is_name_token(const Token& t) {
    switch (t.kind) {
    case Token::Kind::Atom:
    case Token::Kind::Operator:
    case Token::Kind::Neck:
    case Token::Kind::Query:
        return true;
    case Token::Kind::Punct:
        return t.text == "."; // functor dot
    default:
        return false;
    }
}

bool is_punct(const Token& t, std::string_view text) {
    return t.kind == Token::Kind::Punct && t.text == text;
}

class TermParser {
public:
    TermParser(std::span<const Token> tokens, std::size_t start)
        : tokens_(tokens), pos_(start) {}

    TermPtr parse(int maxp) {
        auto [term, prio] = parse_expr(maxp);
        (void)prio;
        return term;
    }

    std::size_t position() const { return pos_; }

private:
    std::span<const Token> tokens_;
    std::size_t pos_;
    int depth_ = 0;
    std::unordered_map<std::string, TermPtr> vars_;
    std::uint64_t next_var_id_ = 0;

    struct DepthGuard {
        TermParser& p;
        explicit DepthGuard(TermParser& parser) : p(parser) {
            if (++p.depth_ > kMaxNesting)
                p.fail(p.peek_pos(), "term nesting too deep");
        }
        ~DepthGuard() { --p.depth_; }
    };

    bool at_end() const { return pos_ >= tokens_.size(); }
    const Token& peek() const { return tokens_[pos_]; }
    const Token& take() { return tokens_[pos_++]; }

    SourcePos peek_pos() const {
        if (at_end())
            return tokens_.empty() ? SourcePos{} : tokens_.back().pos;
        return peek().pos;
    }

    [[noreturn]] void fail(SourcePos pos, const std::string& msg) {
        throw SyntaxError(pos, msg);
    }

    void expect_punct(std::string_view text, const char* what) {
        if (at_end() || !is_punct(peek(), text))
            fail(peek_pos(), std::string("expected ") + what);
        take();
    }

    TermPtr variable(const Token& tok) {
        if (tok.text == "_")
            return make_var("_", next_var_id_++);
        auto it = vars_.find(tok.text);
        if (it != vars_.end())
            return it->second;
        TermPtr v = make_var(tok.text, next_var_id_++);
        vars_.emplace(tok.text, v);
        return v;
    }

    TermPtr int_literal(const Token& tok, bool negative) {
        std::string text = negative ? "-" + tok.text : tok.text;
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size())
            fail(tok.pos, "integer literal out of range");
        return make_int(value);
    }

    TermPtr float_literal(const Token& tok, bool negative) {
        double value = std::strtod(tok.text.c_str(), nullptr);
        return make_float(negative ? -value : value);
    }

    bool token_can_start_term(const Token& t) const {
        switch (t.kind) {
        case Token::Kind::Int:
        case Token::Kind::Float:
        case Token::Kind::Var:
            return true;
        case Token::Kind::Punct:
            return t.text == "(" || t.text == "[" || t.text == ".";
        case Token::Kind::Atom:
        case Token::Kind::Operator:
        case Token::Kind::Neck:
        case Token::Kind::Query:
            return true;
        default:
            return false;
        }
    }

    // term plus the priority of its principal operator (0 for plain terms)
    std::pair<TermPtr, int> parse_expr(int maxp) {
        DepthGuard guard(*this);
        auto [left, left_prio] = parse_primary(maxp);
        for (;;) {
            if (at_end())
                break;
            const Token& tok = peek();
            std::string_view name;
            if (is_punct(tok, ","))
                name = ",";
            else if (is_name_token(tok))
                name = tok.text;
            else
                break;
            auto op = lookup_infix(name);
            if (!op || op->priority > maxp)
                break;
            if (left_prio > infix_left_max(*op))
                fail(tok.pos, "operator priority clash");
            take();
            TermPtr right = parse_expr(infix_right_max(*op)).first;
            left = make_compound(std::string(name), {left, right});
            left_prio = op->priority;
        }
        return {left, left_prio};
    }

    std::pair<TermPtr, int> parse_primary(int maxp) {
        DepthGuard guard(*this);
        if (at_end())
            fail(peek_pos(), "unexpected end of input");
        const Token& tok = take();
        switch (tok.kind) {
        case Token::Kind::Int:
            return {int_literal(tok, false), 0};
        case Token::Kind::Float:
            return {float_literal(tok, false), 0};
        case Token::Kind::Var:
            return {variable(tok), 0};
        case Token::Kind::EndDot:
            fail(tok.pos, "unexpected end of clause");
        case Token::Kind::Punct:
            if (tok.text == "(") {
                TermPtr inner = parse_expr(1200).first;
                expect_punct(")", "')'");
                return {inner, 0};
            }
            if (tok.text == "[")
                return {parse_list(), 0};
            if (tok.text == ".")
                return {name_term(tok, maxp), 0};
            fail(tok.pos, "unexpected token '" + tok.text + "'");
        default:
            return name_term_with_prio(tok, maxp);
        }
    }

    TermPtr name_term(const Token& tok, int maxp) {
        return name_term_with_prio(tok, maxp).first;
    }

    std::pair<TermPtr, int> name_term_with_prio(const Token& tok, int maxp) {
        const std::string& name = tok.text;

        if (!at_end() && is_punct(peek(), "(")) {
            take();
            std::vector<TermPtr> args;
            args.push_back(parse_expr(999).first);
            while (!at_end() && is_punct(peek(), ",")) {
                take();
                args.push_back(parse_expr(999).first);
            }
            expect_punct(")", "')' after arguments");
            return {make_compound(name, std::move(args)), 0};
        }

        if (auto op = lookup_prefix(name); op && op->priority <= maxp) {
            if (name == "-" && !at_end() &&
                (peek().kind == Token::Kind::Int || peek().kind == Token::Kind::Float)) {
                // A minus glued to a number is a negative literal; with
                // layout between them it is the prefix operator.
                const Token& num = peek();
                bool adjacent = num.pos.line == tok.pos.line &&
                                num.pos.column == tok.pos.column + 1;
                if (adjacent) {
                    take();
                    return {num.kind == Token::Kind::Int ? int_literal(num, true)
                                                         : float_literal(num, true),
                            0};
                }
            }
            if (!at_end() && operand_follows()) {
                TermPtr arg = parse_expr(prefix_arg_max(*op)).first;
                return {make_compound(name, {arg}), op->priority};
            }
        }

        return {make_atom(name), 0};
    }

    // Decides whether a prefix operator is applied or stands as a plain atom.
    bool operand_follows() const {
        const Token& t = peek();
        if (!token_can_start_term(t))
            return false;
        if (is_name_token(t) && !is_punct(t, ".")) {
            // An infix-only operator cannot begin an operand: in "a - * b"
            // the * must not be swallowed as the operand of -.
            if (lookup_infix(t.text) && !lookup_prefix(t.text)) {
                if (pos_ + 1 < tokens_.size() && is_punct(tokens_[pos_ + 1], "("))
                    return true; // it is a functor application like *(...)
                return false;
            }
        }
        return true;
    }

    TermPtr parse_list() {
        DepthGuard guard(*this);
        if (!at_end() && is_punct(peek(), "]")) {
            take();
            return atom_nil();
        }
        std::vector<TermPtr> items;
        items.push_back(parse_expr(999).first);
        while (!at_end() && is_punct(peek(), ",")) {
            take();
            items.push_back(parse_expr(999).first);
        }
        TermPtr tail = nullptr;
        if (!at_end() && is_punct(peek(), "|")) {
            take();
            tail = parse_expr(999).first;
        }
        expect_punct("]", "']' closing list");
        return make_list(items, std::move(tail));
    }
};

} // namespace

ParsedTerm parse_term(std::span<const Token> tokens, std::size_t start,
                      int max_precedence) {
    if (start >= tokens.size())
        throw SyntaxError(tokens.empty() ? SourcePos{} : tokens.back().pos,
                          "unexpected end of input");
    TermParser parser(tokens, start);
    TermPtr term = parser.parse(max_precedence);
    return {term, parser.position()};
}

ItemReader::ItemReader(std::string_view source, SourcePos origin)
    : tokens_(tokenize(source, origin)) {}

std::optional<ProgramItem> ItemReader::next() {
    if (pos_ >= tokens_.size())
        return std::nullopt;

    SourcePos item_pos = tokens_[pos_].pos;
    bool query = false;
    if (tokens_[pos_].kind == Token::Kind::Query) {
        query = true;
        ++pos_;
    }

    TermParser parser(std::span<const Token>(tokens_), pos_);
    TermPtr term = parser.parse(query ? 1199 : 1200);
    pos_ = parser.position();

    if (pos_ >= tokens_.size())
        throw SyntaxError(tokens_.back().pos, "expected '.' at end of item");
    if (tokens_[pos_].kind != Token::Kind::EndDot) {
        const Token& t = tokens_[pos_];
        if (is_name_token(t) && lookup_infix(t.text))
            throw SyntaxError(t.pos, "operator priority clash");
        throw SyntaxError(t.pos, "expected '.' at end of item, found '" + t.text + "'");
    }
    ++pos_;

    ProgramItem item;
    item.pos = item_pos;
    if (query) {
        item.kind = ProgramItem::Kind::Query;
        item.goal = term;
        return item;
    }

    // A unary :- item is a directive; run it like a query.
    if (term->is_compound() && term->text == ":-" && term->args.size() == 1) {
        item.kind = ProgramItem::Kind::Query;
        item.goal = term->args[0];
        return item;
    }

    TermPtr head = term;
    TermPtr body = atom_true();
    if (term->is_compound() && term->text == ":-" && term->args.size() == 2) {
        head = term->args[0];
        body = term->args[1];
    }
    if (!head->is_callable())
        throw SyntaxError(item_pos, "clause head is not callable");

    item.kind = ProgramItem::Kind::Clause;
    item.head = head;
    item.body = body;
    return item;
}

} // namespace psp::prolog
