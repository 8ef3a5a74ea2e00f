#include "psp/prolog/arith.hpp"

#include <cmath>
#include <limits>

namespace psp::prolog {

namespace {

[[noreturn]] void err(ErrorKind kind, const TermPtr& culprit) {
    throw EvalError{kind, culprit};
}

Number check_float(double v, const TermPtr& at) {
    if (std::isinf(v))
        err(ErrorKind::Overflow, at);
    if (std::isnan(v))
        err(ErrorKind::Arithmetic, at);
    return Number::of(v);
}

Number add(const Number& a, const Number& b, const TermPtr& at) {
    if (a.is_int && b.is_int) {
        std::int64_t r;
        if (__builtin_add_overflow(a.i, b.i, &r))
            err(ErrorKind::Overflow, at);
        return Number::of(r);
    }
    return check_float(a.as_double() + b.as_double(), at);
}

Number sub(const Number& a, const Number& b, const TermPtr& at) {
    if (a.is_int && b.is_int) {
        std::int64_t r;
        if (__builtin_sub_overflow(a.i, b.i, &r))
            err(ErrorKind::Overflow, at);
        return Number::of(r);
    }
    return check_float(a.as_double() - b.as_double(), at);
}

Number mul(const Number& a, const Number& b, const TermPtr& at) {
    if (a.is_int && b.is_int) {
        std::int64_t r;
        if (__builtin_mul_overflow(a.i, b.i, &r))
            err(ErrorKind::Overflow, at);
        return Number::of(r);
    }
    return check_float(a.as_double() * b.as_double(), at);
}

Number divide(const Number& a, const Number& b, const TermPtr& at) {
    if (a.is_int && b.is_int) {
        if (b.i == 0)
            err(ErrorKind::Arithmetic, at);
        // MIN % -1 traps in hardware, so handle -1 before the remainder
        if (b.i == -1) {
            if (a.i == std::numeric_limits<std::int64_t>::min())
                err(ErrorKind::Overflow, at);
            return Number::of(-a.i);
        }
        if (a.i % b.i == 0)
            return Number::of(a.i / b.i);
        return Number::of(static_cast<double>(a.i) / static_cast<double>(b.i));
    }
    if (b.as_double() == 0.0)
        err(ErrorKind::Arithmetic, at);
    return check_float(a.as_double() / b.as_double(), at);
}

std::int64_t require_int(const Number& n, const TermPtr& at) {
    if (!n.is_int)
        err(ErrorKind::Type, at);
    return n.i;
}

Number int_div(const Number& a, const Number& b, const TermPtr& at) {
    std::int64_t x = require_int(a, at);
    std::int64_t y = require_int(b, at);
    if (y == 0)
        err(ErrorKind::Arithmetic, at);
    if (x == std::numeric_limits<std::int64_t>::min() && y == -1)
        err(ErrorKind::Overflow, at);
    return Number::of(x / y); // truncating
}

Number int_mod(const Number& a, const Number& b, const TermPtr& at) {
    std::int64_t x = require_int(a, at);
    std::int64_t y = require_int(b, at);
    if (y == 0)
        err(ErrorKind::Arithmetic, at);
    if (y == -1)
        return Number::of(std::int64_t{0}); // avoids MIN % -1 overflow
    std::int64_t r = x % y;
    if (r != 0 && ((r < 0) != (y < 0)))
        r += y; // floored: result takes the divisor's sign
    return Number::of(r);
}

Number negate(const Number& a, const TermPtr& at) {
    if (a.is_int) {
        if (a.i == std::numeric_limits<std::int64_t>::min())
            err(ErrorKind::Overflow, at);
        return Number::of(-a.i);
    }
    return Number::of(-a.f);
}

Number abs_of(const Number& a, const TermPtr& at) {
    if (a.is_int)
        return a.i < 0 ? negate(a, at) : a;
    return Number::of(std::fabs(a.f));
}

// Expressions assembled at run time can nest far deeper than any source
// text; cap the recursion instead of exhausting the C++ stack.
constexpr int kMaxEvalDepth = 10000;

Number eval_at(const TermPtr& expr, const BindingStore& store, int depth) {
    if (depth > kMaxEvalDepth)
        err(ErrorKind::Arithmetic, expr);
    const TermPtr& t = store.shallow_deref(expr);
    switch (t->tag) {
    case Term::Tag::Var:
        err(ErrorKind::Instantiation, t);
    case Term::Tag::Int:
        return Number::of(t->ival);
    case Term::Tag::Float:
        return Number::of(t->fval);
    case Term::Tag::Atom:
        err(ErrorKind::Type, t);
    case Term::Tag::Compound:
        break;
    }

    const std::string& f = t->text;
    if (t->args.size() == 1) {
        Number a = eval_at(t->args[0], store, depth + 1);
        if (f == "-")
            return negate(a, t);
        if (f == "abs")
            return abs_of(a, t);
        err(ErrorKind::Type, t);
    }
    if (t->args.size() == 2) {
        Number a = eval_at(t->args[0], store, depth + 1);
        Number b = eval_at(t->args[1], store, depth + 1);
        if (f == "+")
            return add(a, b, t);
        if (f == "-")
            return sub(a, b, t);
        if (f == "*")
            return mul(a, b, t);
        if (f == "/")
            return divide(a, b, t);
        if (f == "//")
            return int_div(a, b, t);
        if (f == "mod")
            return int_mod(a, b, t);
        if (f == "min")
            return compare_numbers(b, a) < 0 ? b : a;
        if (f == "max")
            return compare_numbers(b, a) > 0 ? b : a;
    }
    err(ErrorKind::Type, t);
}

} // namespace

int compare_numbers(const Number& a, const Number& b) {
    if (a.is_int && b.is_int)
        return a.i < b.i ? -1 : (a.i > b.i ? 1 : 0);
    double x = a.as_double();
    double y = b.as_double();
    return x < y ? -1 : (x > y ? 1 : 0);
}

Number eval_arith(const TermPtr& expr, const BindingStore& store) {
    return eval_at(expr, store, 0);
}

} // namespace psp::prolog
