#include "psp/prolog/writer.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

#include "psp/prolog/ops.hpp"

namespace psp::prolog {

namespace {

constexpr int kMaxDepth = 30000;

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

bool all_symbol_chars(std::string_view s) {
    for (char c : s)
        if (!is_symbol_char(c))
            return false;
    return !s.empty();
}

bool plain_identifier(std::string_view s) {
    if (s.empty() || !std::islower(static_cast<unsigned char>(s[0])))
        return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
            return false;
    return true;
}

std::string format_float(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    std::string s(buf, end);
    // Keep the text lexable as a float: a fraction part must be present.
    auto epos = s.find_first_of("eE");
    if (epos == std::string::npos) {
        if (s.find('.') == std::string::npos)
            s += ".0";
    } else if (s.find('.') == std::string::npos || s.find('.') > epos) {
        s.insert(epos, ".0");
    }
    return s;
}

class Writer {
public:
    explicit Writer(bool quoted) : quoted_(quoted) {}

    std::string take() { return std::move(out_); }

    void write(const TermPtr& t, int maxp, bool isolated) {
        if (++depth_ > kMaxDepth)
            throw std::runtime_error("term too deep to print");
        const Term& term = *t;
        switch (term.tag) {
        case Term::Tag::Var:
            emit(term.text);
            break;
        case Term::Tag::Int:
            emit(std::to_string(term.ival));
            break;
        case Term::Tag::Float:
            emit(format_float(term.fval));
            break;
        case Term::Tag::Atom:
            write_atom(term.text, isolated);
            break;
        case Term::Tag::Compound:
            write_compound(t, maxp);
            break;
        }
        --depth_;
    }

private:
    bool quoted_;
    std::string out_;
    int depth_ = 0;

    // Inserts a space where two lexemes would otherwise merge.
    void emit(std::string_view text) {
        if (!text.empty() && !out_.empty()) {
            char a = out_.back();
            char b = text.front();
            bool alnum_join = (std::isalnum(static_cast<unsigned char>(a)) || a == '_') &&
                              (std::isalnum(static_cast<unsigned char>(b)) || b == '_');
            if (alnum_join || (is_symbol_char(a) && is_symbol_char(b)))
                out_ += ' ';
        }
        out_ += text;
    }

    void write_atom(const std::string& name, bool isolated) {
        // An operator atom standing as an operand is parenthesized so it
        // cannot be read as an application.
        bool guard = !isolated && is_operator_name(name) && (!quoted_ || !atom_needs_quotes(name));
        if (guard)
            out_ += '(';
        if (quoted_ && atom_needs_quotes(name)) {
            out_ += '\'';
            for (char c : name) {
                out_ += c;
                if (c == '\'')
                    out_ += c;
            }
            out_ += '\'';
        } else {
            emit(name);
        }
        if (guard)
            out_ += ')';
    }

    void write_args(const Term& term) {
        out_ += '(';
        for (std::size_t i = 0; i < term.args.size(); ++i) {
            if (i > 0)
                out_ += ',';
            write(term.args[i], 999, false);
        }
        out_ += ')';
    }

    void write_compound(const TermPtr& t, int maxp) {
        const Term& term = *t;
        if (is_cons(term)) {
            write_list(t);
            return;
        }
        if (term.args.size() == 2) {
            if (auto op = lookup_infix(term.text)) {
                bool parens = op->priority > maxp;
                if (parens)
                    out_ += '(';
                write(term.args[0], infix_left_max(*op), false);
                if (term.text == ",")
                    out_ += ',';
                else
                    write_atom(term.text, true);
                write(term.args[1], infix_right_max(*op), false);
                if (parens)
                    out_ += ')';
                return;
            }
        }
        if (term.args.size() == 1) {
            if (auto op = lookup_prefix(term.text)) {
                bool parens = op->priority > maxp;
                if (parens)
                    out_ += '(';
                write_atom(term.text, true);
                // "- 1" keeps the operator distinct from a negative literal.
                if (term.text == "-" && term.args[0]->is_number())
                    out_ += ' ';
                write(term.args[0], prefix_arg_max(*op), false);
                if (parens)
                    out_ += ')';
                return;
            }
        }
        write_atom(term.text, true);
        write_args(term);
    }

    void write_list(const TermPtr& t) {
        out_ += '[';
        const Term* cur = t.get();
        bool first = true;
        while (true) {
            if (!first)
                out_ += ',';
            write(cur->args[0], 999, false);
            first = false;
            const Term* tail = cur->args[1].get();
            if (is_cons(*tail)) {
                cur = tail;
                continue;
            }
            if (!is_nil(*tail)) {
                out_ += '|';
                write(cur->args[1], 999, false);
            }
            break;
        }
        out_ += ']';
    }
};

} // namespace

bool atom_needs_quotes(std::string_view name) {
    if (plain_identifier(name))
        return false;
    if (name == "[]" || name == "!" || name == ";")
        return false;
    if (all_symbol_chars(name) && name != ".")
        return false;
    return true;
}

std::string format_term(const TermPtr& t, bool quoted) {
    Writer w(quoted);
    w.write(t, 1200, true);
    return w.take();
}

} // namespace psp::prolog
