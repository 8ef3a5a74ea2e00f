#include <doctest.h>

#include <limits>
#include <stdexcept>

#include "psp/prolog/writer.hpp"

#include "../support/helpers.hpp"

using namespace psp::prolog;
using test_support::alpha_equal;
using test_support::parse_one;
using test_support::TermGen;

namespace {

std::string quoted(const std::string& text) {
    return format_term(parse_one(text), true);
}

} // namespace

TEST_CASE("operators print with minimal parentheses") {
    CHECK(quoted("a+b*c") == "a+b*c");
    CHECK(quoted("(a+b)*c") == "(a+b)*c");
    CHECK(quoted("a+(b+c)") == "a+(b+c)"); // right nesting of a yfx op stays
    CHECK(quoted("a+b+c") == "a+b+c");
    CHECK(quoted("a,b;c") == "a,b;c");
    CHECK(quoted("(a;b),c") == "(a;b),c");
    CHECK(quoted("a;b;c") == "a;b;c");
    CHECK(quoted("(a;b);c") == "(a;b);c");
    CHECK(quoted("\\+ x") == "\\+x");
    CHECK(quoted("X = f(Y)") == "X=f(Y)");
    CHECK(quoted("p :- q, r") == "p:-q,r");
}

TEST_CASE("atoms quote only when needed") {
    CHECK(format_term(make_atom("hello world"), true) == "'hello world'");
    CHECK(format_term(make_atom("hello world"), false) == "hello world");
    CHECK(format_term(make_atom("foo"), true) == "foo");
    CHECK(format_term(make_atom("Foo"), true) == "'Foo'");
    CHECK(format_term(make_atom("[]"), true) == "[]");
    CHECK(format_term(make_atom("!"), true) == "!");
    CHECK(format_term(make_atom(""), true) == "''");
    CHECK(format_term(make_atom("it's"), true) == "'it''s'");
    CHECK(format_term(make_atom("1abc"), true) == "'1abc'");
}

TEST_CASE("operator atoms as operands are shielded") {
    CHECK(quoted("f(+, a)") == "f((+),a)");
    TermPtr eq = make_compound("=", {make_atom("+"), make_atom("+")});
    CHECK(alpha_equal(parse_one(format_term(eq, true)), eq));
}

TEST_CASE("numbers stay readable") {
    CHECK(format_term(make_int(-42), true) == "-42");
    CHECK(format_term(make_int(std::numeric_limits<std::int64_t>::min()), true) ==
          "-9223372036854775808");
    CHECK(format_term(make_float(3.5), true) == "3.5");
    CHECK(format_term(make_float(1e300), true) == "1.0e+300");
    CHECK(format_term(make_float(-2.5e-7), true) == "-2.5e-07");
    SUBCASE("unary minus keeps a space before a number") {
        CHECK(quoted("- 5") == "- 5");
        CHECK(quoted("-5") == "-5");
        CHECK(alpha_equal(parse_one(quoted("- 5")), parse_one("-(5)")));
    }
}

TEST_CASE("lists") {
    CHECK(quoted("[1, 2, 3]") == "[1,2,3]");
    CHECK(quoted("[a|T]") == "[a|T]");
    CHECK(quoted("[a, b|T]") == "[a,b|T]");
    CHECK(quoted("[[1], []]") == "[[1],[]]");
    SUBCASE("an improper tail prints after the bar") {
        CHECK(quoted("[a|b]") == "[a|b]");
    }
}

TEST_CASE("absurdly deep terms are refused rather than overflowing") {
    TermPtr t = make_atom("x");
    for (int i = 0; i < 40000; ++i)
        t = make_compound("f", {std::move(t)});
    CHECK_THROWS_AS(format_term(t, true), std::runtime_error);
    // the same spine also exercises iterative destruction when t dies
}

TEST_CASE("format and re-parse returns an alpha-equivalent term") {
    TermGen gen(20260825);
    int checked = 0;
    for (int i = 0; i < 12000; ++i) {
        TermPtr t = gen.gen_distinct_vars(1 + static_cast<int>(gen.rng()() % 5));
        std::string text = format_term(t, true);
        CAPTURE(text);
        TermPtr back = parse_one(text);
        REQUIRE(alpha_equal(t, back));
        // and formatting again is a fixed point
        REQUIRE(format_term(back, true) == text);
        ++checked;
    }
    CHECK(checked == 12000);
}
