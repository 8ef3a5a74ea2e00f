#include <doctest.h>

#include <random>
#include <set>
#include <string>

#include "psp/prolog/solve.hpp"
#include "psp/prolog/writer.hpp"

#include "../support/helpers.hpp"

using namespace psp::prolog;
using test_support::load_program;
using test_support::parse_one;
using test_support::run_goal;

namespace {

TermPtr binding_of(const SolveOutcome& out, const TermPtr& goal,
                   const std::string& var_name) {
    for (const TermPtr& v : term_vars(goal))
        if (v->text == var_name) {
            auto it = out.bindings.find(v->var_id);
            REQUIRE(it != out.bindings.end());
            return it->second;
        }
    FAIL("no variable ", var_name, " in goal");
    return nullptr;
}

SolveOutcome solve_text(Database& db, const std::string& goal_text,
                        TermPtr* goal_out = nullptr,
                        std::string* sink = nullptr) {
    TermPtr goal = parse_one(goal_text);
    if (goal_out)
        *goal_out = goal;
    return solve(goal, db, 1'000'000, sink);
}

} // namespace

TEST_CASE("facts and rules resolve") {
    Database db;
    load_program(db, R"(
        parent(tom, bob).
        parent(bob, ann).
        grandparent(X, Z) :- parent(X, Y), parent(Y, Z).
    )");
    CHECK(run_goal(db, "parent(tom, bob)").ok());
    CHECK(run_goal(db, "grandparent(tom, ann)").ok());
    CHECK(run_goal(db, "grandparent(tom, bob)").kind ==
          SolveOutcome::Kind::Failure);

    SUBCASE("the first solution is reported with its bindings") {
        TermPtr goal;
        SolveOutcome out = solve_text(db, "parent(tom, Who)", &goal);
        REQUIRE(out.ok());
        CHECK(binding_of(out, goal, "Who")->text == "bob");
    }
    SUBCASE("clause order decides which solution comes first") {
        TermPtr goal;
        SolveOutcome out = solve_text(db, "parent(A, B)", &goal);
        REQUIRE(out.ok());
        CHECK(binding_of(out, goal, "A")->text == "tom");
        CHECK(binding_of(out, goal, "B")->text == "bob");
    }
}

TEST_CASE("conjunction, disjunction, negation, if-then-else") {
    Database db;
    load_program(db, "p(1). p(2). q(2).");

    CHECK(run_goal(db, "p(1), q(2)").ok());
    CHECK(run_goal(db, "p(3), q(2)").kind == SolveOutcome::Kind::Failure);
    CHECK(run_goal(db, "true ; fail").ok());
    CHECK(run_goal(db, "fail ; true").ok());
    CHECK(run_goal(db, "fail ; fail").kind == SolveOutcome::Kind::Failure);

    SUBCASE("backtracking across the conjunction finds the joint solution") {
        TermPtr goal;
        SolveOutcome out = solve_text(db, "p(X), q(X)", &goal);
        REQUIRE(out.ok());
        CHECK(binding_of(out, goal, "X")->ival == 2);
    }
    SUBCASE("negation as failure") {
        CHECK(run_goal(db, "\\+ fail").ok());
        CHECK(run_goal(db, "\\+ true").kind == SolveOutcome::Kind::Failure);
        CHECK(run_goal(db, "\\+ p(3)").ok());
        CHECK(run_goal(db, "\\+ p(1)").kind == SolveOutcome::Kind::Failure);
    }
    SUBCASE("negation undoes bindings but keeps outer ones") {
        TermPtr goal;
        SolveOutcome out = solve_text(db, "X = 2, \\+ (X = 1)", &goal);
        REQUIRE(out.ok());
        CHECK(binding_of(out, goal, "X")->ival == 2);

        SolveOutcome dn = solve_text(db, "\\+ \\+ (Y = 1)", &goal);
        REQUIRE(dn.ok());
        CHECK(binding_of(dn, goal, "Y")->is_var()); // probe bindings are gone
    }
    SUBCASE("if-then-else commits to the condition's first solution") {
        CHECK(run_goal(db, "(fail -> p(1) ; true)").ok());
        CHECK(run_goal(db, "(true -> true ; fail)").ok());
        CHECK(run_goal(db, "(fail -> true)").kind == SolveOutcome::Kind::Failure);
        CHECK(run_goal(db, "(true -> fail ; true)").kind ==
              SolveOutcome::Kind::Failure);
        // commits to X = 1, so the then-branch q(1) fails for good
        CHECK(run_goal(db, "(p(X) -> q(X) ; true)").kind ==
              SolveOutcome::Kind::Failure);
        // but the condition itself may backtrack before its first success
        TermPtr goal;
        SolveOutcome out = solve_text(db, "(p(X), X > 1 -> q(X) ; fail)", &goal);
        REQUIRE(out.ok());
        CHECK(binding_of(out, goal, "X")->ival == 2);
    }
    SUBCASE("condition bindings flow into the then-branch") {
        TermPtr goal;
        SolveOutcome out = solve_text(db, "(q(Y) -> p(Y) ; fail)", &goal);
        REQUIRE(out.ok());
        CHECK(binding_of(out, goal, "Y")->ival == 2);
    }
    SUBCASE("call wraps any goal") {
        CHECK(run_goal(db, "call((p(2), q(2)))").ok());
        CHECK(run_goal(db, "X = p(1), call(X)").ok());
        CHECK(run_goal(db, "call(X)").kind == SolveOutcome::Kind::Error);
        CHECK(run_goal(db, "call(42)").kind == SolveOutcome::Kind::Error);
    }
}

TEST_CASE("type probes and comparisons") {
    Database db;
    CHECK(run_goal(db, "var(X)").ok());
    CHECK(run_goal(db, "X = a, var(X)").kind == SolveOutcome::Kind::Failure);
    CHECK(run_goal(db, "X = a, nonvar(X)").ok());
    CHECK(run_goal(db, "atom(foo)").ok());
    CHECK(run_goal(db, "atom([])").ok());
    CHECK(run_goal(db, "atom(f(a))").kind == SolveOutcome::Kind::Failure);
    CHECK(run_goal(db, "atom(1)").kind == SolveOutcome::Kind::Failure);
    CHECK(run_goal(db, "number(3)").ok());
    CHECK(run_goal(db, "number(3.5)").ok());
    CHECK(run_goal(db, "number(three)").kind == SolveOutcome::Kind::Failure);

    CHECK(run_goal(db, "f(X) = f(1), X == 1").ok());
    CHECK(run_goal(db, "X == Y").kind == SolveOutcome::Kind::Failure);
    CHECK(run_goal(db, "X = Y, X == Y").ok());
    CHECK(run_goal(db, "a \\== b").ok());
    CHECK(run_goal(db, "1 \\== 1.0").ok());
    CHECK(run_goal(db, "f(a) \\= g(a)").ok());
    CHECK(run_goal(db, "f(X) \\= f(1)").kind == SolveOutcome::Kind::Failure);
    SUBCASE("a failed non-unifiability probe leaves no bindings") {
        TermPtr goal;
        SolveOutcome out = solve_text(db, "\\+ (f(X) \\= f(1)), var(X)", &goal);
        CHECK(out.ok());
    }

    CHECK(run_goal(db, "1 < 2").ok());
    CHECK(run_goal(db, "1 + 1 =:= 2").ok());
    CHECK(run_goal(db, "1 =:= 1.0").ok());
    CHECK(run_goal(db, "2 =\\= 3").ok());
    CHECK(run_goal(db, "4 =< 4").ok());
    CHECK(run_goal(db, "5 >= 2 * 2").ok());
    CHECK(run_goal(db, "1 > 2").kind == SolveOutcome::Kind::Failure);
    SUBCASE("is binds and checks") {
        TermPtr goal;
        SolveOutcome out = solve_text(db, "X is 6 * 7", &goal);
        REQUIRE(out.ok());
        CHECK(binding_of(out, goal, "X")->ival == 42);
        CHECK(run_goal(db, "42 is 6 * 7").ok());
        CHECK(run_goal(db, "41 is 6 * 7").kind == SolveOutcome::Kind::Failure);
    }
}

TEST_CASE("runtime errors carry a kind and culprit") {
    Database db;
    load_program(db, "p(1).");

    SolveOutcome missing = run_goal(db, "nosuch(a, b)");
    REQUIRE(missing.kind == SolveOutcome::Kind::Error);
    CHECK(missing.error->kind == ErrorKind::Existence);
    CHECK(missing.error->culprit->text == "nosuch");

    SolveOutcome unbound = run_goal(db, "X");
    REQUIRE(unbound.kind == SolveOutcome::Kind::Error);
    CHECK(unbound.error->kind == ErrorKind::Instantiation);

    SolveOutcome numeric = run_goal(db, "p(X), call(X)");
    REQUIRE(numeric.kind == SolveOutcome::Kind::Error);
    CHECK(numeric.error->kind == ErrorKind::Type);

    SolveOutcome arith = run_goal(db, "X is foo + 1");
    REQUIRE(arith.kind == SolveOutcome::Kind::Error);
    CHECK(arith.error->kind == ErrorKind::Type);
    CHECK(arith.error->culprit->text == "foo");

    SolveOutcome inst = run_goal(db, "1 < Y");
    REQUIRE(inst.kind == SolveOutcome::Kind::Error);
    CHECK(inst.error->kind == ErrorKind::Instantiation);

    SolveOutcome overflow = run_goal(db, "X is 9223372036854775807 + 1");
    REQUIRE(overflow.kind == SolveOutcome::Kind::Error);
    CHECK(overflow.error->kind == ErrorKind::Overflow);

    SolveOutcome zero = run_goal(db, "X is 1 // 0");
    REQUIRE(zero.kind == SolveOutcome::Kind::Error);
    CHECK(zero.error->kind == ErrorKind::Arithmetic);

    SUBCASE("errors inside a negation are not swallowed") {
        SolveOutcome out = run_goal(db, "\\+ (X is foo)");
        REQUIRE(out.kind == SolveOutcome::Kind::Error);
        CHECK(out.error->kind == ErrorKind::Type);
    }
    SUBCASE("cut is not supported and says so") {
        SolveOutcome out = run_goal(db, "p(X), !");
        REQUIRE(out.kind == SolveOutcome::Kind::Error);
        CHECK(out.error->kind == ErrorKind::Existence);
        CHECK(out.error->culprit->text == "!");
    }
}

TEST_CASE("write and nl append to the sink") {
    Database db;
    std::string sink;
    TermPtr goal;
    SolveOutcome out = solve_text(db, "write(hello), nl, write([1, 2|T]), write(1 + 2)",
                                  &goal, &sink);
    REQUIRE(out.ok());
    CHECK(sink == "hello\n[1,2|_G0]1+2");
    SUBCASE("write is unquoted") {
        std::string s2;
        Database db2;
        SolveOutcome o2 = solve_text(db2, "write('Hello, World!')", &goal, &s2);
        REQUIRE(o2.ok());
        CHECK(s2 == "Hello, World!");
    }
}

TEST_CASE("solutions respect clause order under failure-driven loops") {
    Database db;
    load_program(db, "p(1). p(2). p(3).");
    std::string sink;
    TermPtr goal;
    SolveOutcome out = solve_text(db, "(p(X), write(X), fail ; true)", &goal, &sink);
    REQUIRE(out.ok());
    CHECK(sink == "123");
}

TEST_CASE("assert and retract") {
    Database db;
    load_program(db, "counter(0).");

    SUBCASE("assertz appends, asserta prepends") {
        Database fresh;
        std::string sink;
        TermPtr goal;
        REQUIRE(solve_text(fresh, "assertz(r(1)), assertz(r(2)), asserta(r(0))",
                           &goal)
                    .ok());
        SolveOutcome out =
            solve_text(fresh, "(r(X), write(X), fail ; true)", &goal, &sink);
        REQUIRE(out.ok());
        CHECK(sink == "012");
    }
    SUBCASE("assert is assertz") {
        Database fresh;
        std::string sink;
        TermPtr goal;
        REQUIRE(solve_text(fresh, "assert(r(1)), assert(r(2))", &goal).ok());
        SolveOutcome out =
            solve_text(fresh, "(r(X), write(X), fail ; true)", &goal, &sink);
        REQUIRE(out.ok());
        CHECK(sink == "12");
    }
    SUBCASE("asserted rules run") {
        REQUIRE(run_goal(db, "assert((double(X, Y) :- Y is X * 2))").ok());
        TermPtr goal;
        SolveOutcome out = solve_text(db, "double(21, Z)", &goal);
        REQUIRE(out.ok());
        CHECK(binding_of(out, goal, "Z")->ival == 42);
    }
    SUBCASE("asserted clauses snapshot their bindings") {
        TermPtr goal;
        REQUIRE(solve_text(db, "X = 7, assert(val(X))", &goal).ok());
        SolveOutcome out = solve_text(db, "val(V)", &goal);
        REQUIRE(out.ok());
        CHECK(binding_of(out, goal, "V")->ival == 7);
    }
    SUBCASE("retract removes the first matching clause only") {
        Database fresh;
        load_program(fresh, "q(1). q(2).");
        TermPtr goal;
        SolveOutcome first = solve_text(fresh, "retract(q(X))", &goal);
        REQUIRE(first.ok());
        CHECK(binding_of(first, goal, "X")->ival == 1);
        CHECK(run_goal(fresh, "q(1)").kind == SolveOutcome::Kind::Failure);
        CHECK(run_goal(fresh, "q(2)").ok());

        SolveOutcome second = solve_text(fresh, "retract(q(X))", &goal);
        REQUIRE(second.ok());
        CHECK(binding_of(second, goal, "X")->ival == 2);
        CHECK(run_goal(fresh, "retract(q(_))").kind ==
              SolveOutcome::Kind::Failure);
    }
    SUBCASE("retract matches rule bodies") {
        Database fresh;
        REQUIRE(run_goal(fresh, "assert((s(X) :- p(X), q(X)))").ok());
        CHECK(run_goal(fresh, "retract((s(Y) :- p(Y), q(Y)))").ok());
        CHECK(run_goal(fresh, "retract((s(Y) :- p(Y), q(Y)))").kind ==
              SolveOutcome::Kind::Failure);
    }
    SUBCASE("builtins are protected") {
        SolveOutcome a = run_goal(db, "assert(nl)");
        REQUIRE(a.kind == SolveOutcome::Kind::Error);
        CHECK(a.error->kind == ErrorKind::Type);
        CHECK(format_term(a.error->culprit, true) == "nl/0");

        SolveOutcome b = run_goal(db, "assert((retract(X) :- p(X)))");
        REQUIRE(b.kind == SolveOutcome::Kind::Error);
        CHECK(format_term(b.error->culprit, true) == "retract/1");

        SolveOutcome c = run_goal(db, "retract(write(_))");
        REQUIRE(c.kind == SolveOutcome::Kind::Error);
        CHECK(c.error->kind == ErrorKind::Type);
    }
    SUBCASE("argument validation") {
        CHECK(run_goal(db, "assert(X)").error->kind == ErrorKind::Instantiation);
        CHECK(run_goal(db, "assert((X :- p(1)))").error->kind ==
              ErrorKind::Instantiation);
        CHECK(run_goal(db, "assert(42)").error->kind == ErrorKind::Type);
        CHECK(run_goal(db, "retract(Y)").error->kind == ErrorKind::Instantiation);
        CHECK(run_goal(db, "retract(3.5)").error->kind == ErrorKind::Type);
    }
}

TEST_CASE("clause lookups snapshot the database at call time") {
    Database db;
    load_program(db, "p(1).");
    // were the growing predicate re-read while backtracking, this would
    // never terminate
    std::string sink;
    TermPtr goal;
    SolveOutcome out =
        solve_text(db, "(p(X), assertz(p(9)), write(X), fail ; true)", &goal, &sink);
    REQUIRE(out.ok());
    CHECK(sink == "1");
    CHECK(run_goal(db, "p(9)").ok());
}

TEST_CASE("base layer is shared and immutable, session layer is private") {
    Database loader;
    load_program(loader, "b(1).");
    auto base = std::make_shared<const ClauseStore>(loader.request_layer());

    Database session_a{base};
    Database session_b{base};

    CHECK(run_goal(session_a, "b(1)").ok());
    CHECK(run_goal(session_a, "retract(b(1))").kind ==
          SolveOutcome::Kind::Failure);
    CHECK(run_goal(session_a, "b(1)").ok()); // still there

    REQUIRE(run_goal(session_a, "assert(mine(a))").ok());
    CHECK(run_goal(session_a, "mine(a)").ok());
    CHECK(run_goal(session_b, "mine(a)").kind == SolveOutcome::Kind::Error);

    SUBCASE("session clauses shadow in order before base clauses") {
        Database s{base};
        REQUIRE(run_goal(s, "asserta(b(0))").ok());
        std::string sink;
        TermPtr goal;
        SolveOutcome out = solve_text(s, "(b(X), write(X), fail ; true)", &goal, &sink);
        REQUIRE(out.ok());
        CHECK(sink == "01");
    }
}

TEST_CASE("runaway recursion exhausts the budget, not the process") {
    Database db;
    load_program(db, "loop :- loop.");
    std::uint64_t budget = 50'000;
    SolveContext ctx;
    ctx.budget = &budget;
    SolveOutcome out = solve(parse_one("loop"), db, ctx);
    CHECK(out.kind == SolveOutcome::Kind::BudgetExceeded);
    CHECK(budget == 0); // the caller's counter reflects consumption

    SUBCASE("a left-growing conjunction is also caught") {
        Database db2;
        load_program(db2, "grow :- grow, grow.");
        std::uint64_t b2 = 50'000;
        CHECK(solve(parse_one("grow"), db2, b2).kind ==
              SolveOutcome::Kind::BudgetExceeded);
    }
    SUBCASE("budget is shared across a conjunction") {
        Database db3;
        load_program(db3, "p(0). p(N) :- M is N - 1, p(M).");
        std::uint64_t tiny = 10;
        CHECK(solve(parse_one("p(1000)"), db3, tiny).kind ==
              SolveOutcome::Kind::BudgetExceeded);
        std::uint64_t enough = 100'000;
        CHECK(solve(parse_one("p(1000)"), db3, enough).ok());
    }
}

TEST_CASE("occurs check can be disabled per context") {
    Database db;
    TermPtr goal = parse_one("X = f(X)");
    CHECK(run_goal(db, "X = f(X)").kind == SolveOutcome::Kind::Failure);

    std::uint64_t budget = 10'000;
    SolveContext ctx;
    ctx.budget = &budget;
    ctx.occurs_check = false;
    SolveOutcome out = solve(goal, db, ctx);
    CHECK(out.ok()); // and extraction did not chase the cycle

    SUBCASE("writing a cyclic term reports an error instead of hanging") {
        std::string sink;
        std::uint64_t b = 10'000;
        SolveContext c2;
        c2.budget = &b;
        c2.occurs_check = false;
        c2.sink = &sink;
        SolveOutcome o = solve(parse_one("X = f(X), write(X)"), db, c2);
        REQUIRE(o.kind == SolveOutcome::Kind::Error);
        CHECK(o.error->kind == ErrorKind::Type);
    }
}

TEST_CASE("host-registered builtins") {
    Database db;
    load_program(db, "p(1).");

    std::vector<std::vector<TermPtr>> calls;
    ExtraOutcome next{ExtraOutcome::Kind::Success, std::nullopt};
    ExtraBuiltins extras;
    extras[PredKey{"probe", 2}] = [&](const std::vector<TermPtr>& args) {
        calls.push_back(args);
        return next;
    };

    std::uint64_t budget = 100'000;
    SolveContext ctx;
    ctx.budget = &budget;
    ctx.extras = &extras;

    SUBCASE("arguments arrive resolved") {
        REQUIRE(solve(parse_one("X = 5, probe(f(X), Y)"), db, ctx).ok());
        REQUIRE(calls.size() == 1);
        CHECK(structural_equal(calls[0][0], parse_one("f(5)")));
        CHECK(calls[0][1]->is_var());
    }
    SUBCASE("failure outcomes backtrack") {
        next.kind = ExtraOutcome::Kind::Failure;
        CHECK(solve(parse_one("probe(a, b)"), db, ctx).kind ==
              SolveOutcome::Kind::Failure);
        CHECK(solve(parse_one("probe(a, b) ; true"), db, ctx).ok());
    }
    SUBCASE("error outcomes abort with the reported error") {
        next.kind = ExtraOutcome::Kind::Error;
        next.error = EngineError{ErrorKind::Instantiation, make_atom("probe")};
        SolveOutcome out = solve(parse_one("probe(a, b)"), db, ctx);
        REQUIRE(out.kind == SolveOutcome::Kind::Error);
        CHECK(out.error->kind == ErrorKind::Instantiation);
    }
    SUBCASE("registered names are protected from assert") {
        SolveOutcome out = solve(parse_one("assert(probe(1, 2))"), db, ctx);
        REQUIRE(out.kind == SolveOutcome::Kind::Error);
        CHECK(out.error->kind == ErrorKind::Type);
        CHECK(format_term(out.error->culprit, true) == "probe/2");
    }
}
