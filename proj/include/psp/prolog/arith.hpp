#pragma once

#include "psp/prolog/errors.hpp"
#include "psp/prolog/term.hpp"
#include "psp/prolog/unify.hpp"

namespace psp::prolog {

struct Number {
    bool is_int;
    std::int64_t i = 0;
    double f = 0.0;

    static Number of(std::int64_t v) { return {true, v, 0.0}; }
    static Number of(double v) { return {false, 0, v}; }

    double as_double() const { return is_int ? static_cast<double>(i) : f; }
    TermPtr to_term() const { return is_int ? make_int(i) : make_float(f); }
};

// Thrown by eval_arith; the solver converts it into an EngineError outcome.
struct EvalError {
    ErrorKind kind;
    TermPtr culprit;
};

// Evaluates +, -, *, //, /, mod, unary -, abs, min, max over integers and
// floats with int-to-float promotion on mixed operands. Division of two
// ints yields an int exactly when it divides evenly. Integer overflow is
// detected, never wrapped.
Number eval_arith(const TermPtr& expr, const BindingStore& store);

// Numeric comparison with promotion; cmp < 0, == 0, > 0.
int compare_numbers(const Number& a, const Number& b);

} // namespace psp::prolog
