#include "psp/prolog/solve.hpp"

#include <cassert>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "psp/prolog/arith.hpp"
#include "psp/prolog/writer.hpp"

namespace psp::prolog {

std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Instantiation: return "instantiation";
    case ErrorKind::Type: return "type";
    case ErrorKind::Existence: return "existence";
    case ErrorKind::Arithmetic: return "arithmetic";
    case ErrorKind::Overflow: return "overflow";
    }
    return "unknown";
}

bool is_builtin_predicate(const PredKey& key) {
    static const std::unordered_set<PredKey, PredKeyHash> kBuiltins = {
        {"true", 0},  {"fail", 0},    {"nl", 0},
        {",", 2},     {";", 2},       {"->", 2},    {"\\+", 1}, {"call", 1},
        {"=", 2},     {"\\=", 2},     {"==", 2},    {"\\==", 2},
        {"is", 2},    {"<", 2},       {">", 2},     {"=<", 2},  {">=", 2},
        {"=:=", 2},   {"=\\=", 2},
        {"var", 1},   {"nonvar", 1},  {"atom", 1},  {"number", 1},
        {"write", 1},
        {"assert", 1}, {"asserta", 1}, {"assertz", 1}, {"retract", 1},
    };
    return kBuiltins.contains(key);
}

namespace {

// The pending-goal structure is a persistent singly linked list: pushing a
// clause body shares the continuation with any choice point that captured
// it earlier. A node is either a goal or a control marker left behind by
// \+ and -> to commit away their choice points.
struct Marker {
    enum class Kind {
        NegCommit, // negated goal proved: undo bindings, fail past it
        IteCommit, // condition proved: drop the else branch, keep bindings
    };
    Kind kind;
    std::size_t frame_index;
    TermPtr then_goal; // IteCommit only
};

struct GoalNode;
using GoalList = std::shared_ptr<const GoalNode>;

struct GoalNode {
    TermPtr goal; // null for marker nodes
    std::optional<Marker> marker;
    GoalList next;

    // Unlink sole-owned tails iteratively; conjunction chains can reach
    // hundreds of thousands of nodes under large budgets.
    ~GoalNode() {
        GoalList n = std::move(next);
        while (n && n.use_count() == 1) {
            GoalList tail = std::move(const_cast<GoalNode&>(*n).next);
            n = std::move(tail);
        }
    }
};

GoalList cons_goal(TermPtr g, GoalList next) {
    auto node = std::make_shared<GoalNode>();
    node->goal = std::move(g);
    node->next = std::move(next);
    return node;
}

GoalList cons_marker(Marker m, GoalList next) {
    auto node = std::make_shared<GoalNode>();
    node->marker = std::move(m);
    node->next = std::move(next);
    return node;
}

TermPtr pred_indicator(const PredKey& key) {
    return make_compound(
        "/", {make_atom(key.name), make_int(static_cast<std::int64_t>(key.arity))});
}

class Machine {
public:
    Machine(Database& db, const SolveContext& ctx) : db_(db), ctx_(ctx) {}

    SolveOutcome run(const TermPtr& goal);

private:
    enum class Step { Continue, Backtrack, Abort };

    struct Frame {
        enum class Kind {
            ClauseAlts,  // remaining clauses of a user predicate call
            Disjunction, // right branch of ;/2 (also the else of ->)
            NegSucceed,  // \+ goal exhausted: resume after the \+
            FailAlt,     // -> without else: nothing to resume
        };
        Kind kind;
        std::size_t trail_mark;
        GoalList resume;
        TermPtr call_goal;              // ClauseAlts
        std::vector<ClausePtr> clauses; // ClauseAlts: snapshot at call time
        std::size_t next_clause = 0;    // ClauseAlts
    };

    bool tick() {
        if (*ctx_.budget == 0)
            return false;
        --*ctx_.budget;
        return true;
    }

    TermPtr fresh_var() {
        std::uint64_t id = next_id_++;
        return make_var("_G" + std::to_string(id), id);
    }

    TermPtr rename_fresh(const TermPtr& t,
                         std::unordered_map<std::uint64_t, TermPtr>& map) {
        return deep_transform(t, nullptr, [&](const TermPtr& v) -> TermPtr {
            auto it = map.find(v->var_id);
            if (it != map.end())
                return it->second;
            TermPtr fresh = fresh_var();
            map.emplace(v->var_id, fresh);
            return fresh;
        });
    }

    void emit(std::string_view s) {
        if (s.empty())
            return;
        if (ctx_.sink)
            ctx_.sink->append(s);
        if (ctx_.output_started)
            *ctx_.output_started = true;
    }

    bool is_protected(const PredKey& key) const {
        return is_builtin_predicate(key) ||
               (ctx_.extras && ctx_.extras->contains(key));
    }

    Step abort_budget() {
        result_.kind = SolveOutcome::Kind::BudgetExceeded;
        result_.error.reset();
        return Step::Abort;
    }

    Step abort_error(ErrorKind kind, const TermPtr& culprit) {
        result_.kind = SolveOutcome::Kind::Error;
        result_.error = EngineError{kind, safe_resolve(culprit)};
        return Step::Abort;
    }

    // With the occurs check disabled, unification can tie a variable to a
    // term containing itself; a full substitution would then never
    // terminate. Probe the variable dependency graph (finitely many ids)
    // before walking the possibly infinite tree.
    bool value_cyclic(const TermPtr& t) const {
        std::unordered_map<std::uint64_t, int> color; // 1 = in progress, 2 = done
        struct Item {
            std::uint64_t id;
            std::vector<TermPtr> vars;
            std::size_t next = 0;
        };
        std::vector<Item> stack;
        auto push = [&](std::uint64_t id) {
            color[id] = 1;
            std::vector<TermPtr> kids;
            if (const TermPtr* value = store_.lookup(id))
                kids = term_vars(*value);
            stack.push_back(Item{id, std::move(kids), 0});
        };
        for (const TermPtr& root : term_vars(t)) {
            if (color.contains(root->var_id))
                continue;
            push(root->var_id);
            while (!stack.empty()) {
                Item& item = stack.back();
                if (item.next >= item.vars.size()) {
                    color[item.id] = 2;
                    stack.pop_back();
                    continue;
                }
                std::uint64_t child = item.vars[item.next++]->var_id;
                auto found = color.find(child);
                if (found == color.end())
                    push(child);
                else if (found->second == 1)
                    return true;
            }
        }
        return false;
    }

    TermPtr safe_resolve(const TermPtr& t) const {
        if (!ctx_.occurs_check && value_cyclic(t))
            return t; // leave the cyclic part unsubstituted
        return store_.resolve(t);
    }

    Step dispatch(const TermPtr& raw);
    std::optional<Step> try_builtin(const TermPtr& g, const std::string& name,
                                    std::size_t n);
    Step handle_marker(const Marker& m);
    Step begin_disjunction(const TermPtr& left, const TermPtr& right);
    Step begin_negation(const TermPtr& inner);
    Step begin_ite(const TermPtr& cond, const TermPtr& then_goal,
                   const TermPtr& else_goal);
    Step call_user_predicate(const TermPtr& g, PredKey key);
    Step call_extra(const ExtraBuiltin& fn, const TermPtr& g);
    Step try_clauses();
    Step backtrack();
    Step do_is(const TermPtr& g);
    Step do_write(const TermPtr& arg);
    Step do_assert(const TermPtr& arg, bool front);
    Step do_retract(const TermPtr& arg);

    Database& db_;
    SolveContext ctx_;
    BindingStore store_;
    std::vector<Frame> frames_;
    GoalList goals_;
    std::uint64_t next_id_ = 0;
    SolveOutcome result_;
};

SolveOutcome Machine::run(const TermPtr& goal) {
    // Rename the query into machine-owned variables so ids never collide
    // with clause-local ones; the map recovers caller bindings at the end.
    std::unordered_map<std::uint64_t, TermPtr> goal_map;
    goals_ = cons_goal(rename_fresh(goal, goal_map), nullptr);

    for (;;) {
        if (!goals_) {
            SolveOutcome out;
            out.kind = SolveOutcome::Kind::Success;
            for (const auto& [orig_id, fresh] : goal_map)
                out.bindings.emplace(orig_id, safe_resolve(fresh));
            return out;
        }
        Step step;
        if (goals_->marker) {
            Marker m = *goals_->marker;
            goals_ = goals_->next;
            step = handle_marker(m);
        } else {
            TermPtr current = goals_->goal;
            goals_ = goals_->next;
            step = dispatch(current);
        }
        if (step == Step::Backtrack)
            step = backtrack();
        if (step == Step::Abort)
            return std::move(result_);
    }
}

Machine::Step Machine::dispatch(const TermPtr& raw) {
    if (!tick())
        return abort_budget();
    TermPtr g = store_.shallow_deref(raw);
    if (g->is_var())
        return abort_error(ErrorKind::Instantiation, g);
    if (g->is_number())
        return abort_error(ErrorKind::Type, g);

    const std::string& name = g->text;
    const std::size_t n = g->arity();

    // Control constructs reshape the goal list or create choice points.
    if (n == 0) {
        if (name == "true")
            return Step::Continue;
        if (name == "fail")
            return Step::Backtrack;
        if (name == "nl") {
            emit("\n");
            return Step::Continue;
        }
    } else if (n == 1) {
        if (name == "\\+")
            return begin_negation(g->args[0]);
        if (name == "call") {
            TermPtr inner = store_.shallow_deref(g->args[0]);
            if (inner->is_var())
                return abort_error(ErrorKind::Instantiation, inner);
            if (inner->is_number())
                return abort_error(ErrorKind::Type, inner);
            goals_ = cons_goal(std::move(inner), goals_);
            return Step::Continue;
        }
    } else if (n == 2) {
        if (name == ",") {
            goals_ = cons_goal(g->args[0], cons_goal(g->args[1], goals_));
            return Step::Continue;
        }
        if (name == ";") {
            TermPtr left = store_.shallow_deref(g->args[0]);
            if (left->is_compound() && left->args.size() == 2 && left->text == "->")
                return begin_ite(left->args[0], left->args[1], g->args[1]);
            return begin_disjunction(g->args[0], g->args[1]);
        }
        if (name == "->")
            return begin_ite(g->args[0], g->args[1], nullptr);
    }

    if (auto handled = try_builtin(g, name, n))
        return *handled;

    PredKey key{name, n};
    if (ctx_.extras) {
        auto it = ctx_.extras->find(key);
        if (it != ctx_.extras->end())
            return call_extra(it->second, g);
    }
    return call_user_predicate(g, std::move(key));
}

std::optional<Machine::Step> Machine::try_builtin(const TermPtr& g,
                                                  const std::string& name,
                                                  std::size_t n) {
    if (n == 1) {
        TermPtr a = store_.shallow_deref(g->args[0]);
        if (name == "var")
            return a->is_var() ? Step::Continue : Step::Backtrack;
        if (name == "nonvar")
            return a->is_var() ? Step::Backtrack : Step::Continue;
        if (name == "atom")
            return a->is_atom() ? Step::Continue : Step::Backtrack;
        if (name == "number")
            return a->is_number() ? Step::Continue : Step::Backtrack;
        if (name == "write")
            return do_write(a);
        if (name == "assert" || name == "assertz")
            return do_assert(a, /*front=*/false);
        if (name == "asserta")
            return do_assert(a, /*front=*/true);
        if (name == "retract")
            return do_retract(a);
        return std::nullopt;
    }
    if (n == 2) {
        if (name == "=")
            return unify(g->args[0], g->args[1], store_, ctx_.occurs_check)
                       ? Step::Continue
                       : Step::Backtrack;
        if (name == "\\=") {
            std::size_t mark = store_.mark();
            if (unify(g->args[0], g->args[1], store_, ctx_.occurs_check)) {
                store_.undo_to(mark);
                return Step::Backtrack;
            }
            return Step::Continue;
        }
        if (name == "==")
            return equal_under(g->args[0], g->args[1], store_) ? Step::Continue
                                                               : Step::Backtrack;
        if (name == "\\==")
            return equal_under(g->args[0], g->args[1], store_) ? Step::Backtrack
                                                               : Step::Continue;
        if (name == "is")
            return do_is(g);

        auto arith_cmp = [&](auto holds) -> Step {
            try {
                Number x = eval_arith(g->args[0], store_);
                Number y = eval_arith(g->args[1], store_);
                return holds(compare_numbers(x, y)) ? Step::Continue
                                                    : Step::Backtrack;
            } catch (const EvalError& e) {
                return abort_error(e.kind, e.culprit);
            }
        };
        if (name == "<")
            return arith_cmp([](int c) { return c < 0; });
        if (name == ">")
            return arith_cmp([](int c) { return c > 0; });
        if (name == "=<")
            return arith_cmp([](int c) { return c <= 0; });
        if (name == ">=")
            return arith_cmp([](int c) { return c >= 0; });
        if (name == "=:=")
            return arith_cmp([](int c) { return c == 0; });
        if (name == "=\\=")
            return arith_cmp([](int c) { return c != 0; });
    }
    return std::nullopt;
}

Machine::Step Machine::handle_marker(const Marker& m) {
    assert(m.frame_index < frames_.size());
    if (m.kind == Marker::Kind::NegCommit) {
        store_.undo_to(frames_[m.frame_index].trail_mark);
        frames_.resize(m.frame_index);
        return Step::Backtrack;
    }
    frames_.resize(m.frame_index);
    goals_ = cons_goal(m.then_goal, goals_);
    return Step::Continue;
}

Machine::Step Machine::begin_disjunction(const TermPtr& left, const TermPtr& right) {
    frames_.push_back(Frame{Frame::Kind::Disjunction, store_.mark(),
                            cons_goal(right, goals_), nullptr, {}, 0});
    goals_ = cons_goal(left, goals_);
    return Step::Continue;
}

Machine::Step Machine::begin_negation(const TermPtr& inner) {
    std::size_t fi = frames_.size();
    frames_.push_back(
        Frame{Frame::Kind::NegSucceed, store_.mark(), goals_, nullptr, {}, 0});
    goals_ = cons_goal(
        inner, cons_marker(Marker{Marker::Kind::NegCommit, fi, nullptr}, nullptr));
    return Step::Continue;
}

Machine::Step Machine::begin_ite(const TermPtr& cond, const TermPtr& then_goal,
                                 const TermPtr& else_goal) {
    std::size_t fi = frames_.size();
    if (else_goal)
        frames_.push_back(Frame{Frame::Kind::Disjunction, store_.mark(),
                                cons_goal(else_goal, goals_), nullptr, {}, 0});
    else
        frames_.push_back(
            Frame{Frame::Kind::FailAlt, store_.mark(), nullptr, nullptr, {}, 0});
    goals_ = cons_goal(
        cond, cons_marker(Marker{Marker::Kind::IteCommit, fi, then_goal}, goals_));
    return Step::Continue;
}

Machine::Step Machine::call_user_predicate(const TermPtr& g, PredKey key) {
    if (!db_.has_predicate(key))
        return abort_error(ErrorKind::Existence, g);
    frames_.push_back(Frame{Frame::Kind::ClauseAlts, store_.mark(), goals_, g,
                            db_.clauses_for(key), 0});
    return try_clauses();
}

Machine::Step Machine::call_extra(const ExtraBuiltin& fn, const TermPtr& g) {
    std::vector<TermPtr> args;
    args.reserve(g->args.size());
    for (const TermPtr& a : g->args)
        args.push_back(safe_resolve(a));
    ExtraOutcome out = fn(args);
    switch (out.kind) {
    case ExtraOutcome::Kind::Success:
        return Step::Continue;
    case ExtraOutcome::Kind::Failure:
        return Step::Backtrack;
    case ExtraOutcome::Kind::Error:
        result_.kind = SolveOutcome::Kind::Error;
        result_.error = out.error ? *out.error
                                  : EngineError{ErrorKind::Type, store_.resolve(g)};
        return Step::Abort;
    }
    return Step::Continue;
}

// Advances the top ClauseAlts frame: tries clauses until a head unifies.
// The frame is popped as soon as no untried alternatives remain, so a
// deterministic tail call leaves no residue behind.
Machine::Step Machine::try_clauses() {
    Frame& f = frames_.back();
    assert(f.kind == Frame::Kind::ClauseAlts);
    while (f.next_clause < f.clauses.size()) {
        if (!tick())
            return abort_budget();
        const ClausePtr& clause = f.clauses[f.next_clause++];
        std::unordered_map<std::uint64_t, TermPtr> map;
        TermPtr head = rename_fresh(clause->head, map);
        if (!unify(f.call_goal, head, store_, ctx_.occurs_check))
            continue; // unify restored the store
        const Term& body = *clause->body;
        TermPtr renamed_body;
        if (!(body.is_atom() && body.text == "true"))
            renamed_body = rename_fresh(clause->body, map);
        GoalList cont = f.resume;
        if (f.next_clause >= f.clauses.size())
            frames_.pop_back(); // f is dangling from here on
        goals_ = renamed_body ? cons_goal(std::move(renamed_body), std::move(cont))
                              : std::move(cont);
        return Step::Continue;
    }
    frames_.pop_back();
    return Step::Backtrack;
}

Machine::Step Machine::backtrack() {
    while (!frames_.empty()) {
        Frame& f = frames_.back();
        store_.undo_to(f.trail_mark);
        switch (f.kind) {
        case Frame::Kind::ClauseAlts: {
            Step s = try_clauses();
            if (s != Step::Backtrack)
                return s;
            break; // exhausted and popped; keep unwinding
        }
        case Frame::Kind::Disjunction:
        case Frame::Kind::NegSucceed:
            goals_ = f.resume;
            frames_.pop_back();
            return Step::Continue;
        case Frame::Kind::FailAlt:
            frames_.pop_back();
            break;
        }
    }
    result_ = SolveOutcome{}; // Failure
    return Step::Abort;
}

Machine::Step Machine::do_is(const TermPtr& g) {
    try {
        Number value = eval_arith(g->args[1], store_);
        return unify(g->args[0], value.to_term(), store_, ctx_.occurs_check)
                   ? Step::Continue
                   : Step::Backtrack;
    } catch (const EvalError& e) {
        return abort_error(e.kind, e.culprit);
    }
}

Machine::Step Machine::do_write(const TermPtr& arg) {
    if (!ctx_.occurs_check && value_cyclic(arg))
        return abort_error(ErrorKind::Type, arg);
    try {
        emit(format_term(store_.resolve(arg), /*quoted=*/false));
    } catch (const std::exception&) {
        // the writer refuses absurdly deep terms
        return abort_error(ErrorKind::Type, arg);
    }
    return Step::Continue;
}

Machine::Step Machine::do_assert(const TermPtr& arg, bool front) {
    if (arg->is_var())
        return abort_error(ErrorKind::Instantiation, arg);
    if (!ctx_.occurs_check && value_cyclic(arg))
        return abort_error(ErrorKind::Type, arg);
    TermPtr whole = store_.resolve(arg);
    TermPtr head = whole;
    TermPtr body = atom_true();
    if (whole->is_compound() && whole->args.size() == 2 && whole->text == ":-") {
        head = whole->args[0];
        body = whole->args[1];
    }
    if (head->is_var())
        return abort_error(ErrorKind::Instantiation, head);
    if (!head->is_callable())
        return abort_error(ErrorKind::Type, head);
    PredKey key = pred_key(*head);
    if (is_protected(key))
        return abort_error(ErrorKind::Type, pred_indicator(key));

    // Snapshot with clause-local variable numbering: later bindings of the
    // source variables must never leak into the stored clause.
    std::unordered_map<std::uint64_t, TermPtr> local;
    std::uint64_t next_local = 0;
    auto renumber = [&](const TermPtr& v) -> TermPtr {
        auto it = local.find(v->var_id);
        if (it != local.end())
            return it->second;
        TermPtr fresh = make_var("_L" + std::to_string(next_local), next_local);
        ++next_local;
        local.emplace(v->var_id, fresh);
        return fresh;
    };
    auto clause = std::make_shared<Clause>(
        Clause{deep_transform(head, nullptr, renumber),
               deep_transform(body, nullptr, renumber)});
    if (front)
        db_.assert_front(std::move(clause));
    else
        db_.assert_back(std::move(clause));
    return Step::Continue;
}

Machine::Step Machine::do_retract(const TermPtr& arg) {
    if (arg->is_var())
        return abort_error(ErrorKind::Instantiation, arg);
    TermPtr head = arg;
    TermPtr body = atom_true();
    if (arg->is_compound() && arg->args.size() == 2 && arg->text == ":-") {
        head = arg->args[0];
        body = arg->args[1];
    }
    TermPtr h = store_.shallow_deref(head);
    if (h->is_var())
        return abort_error(ErrorKind::Instantiation, h);
    if (!h->is_callable())
        return abort_error(ErrorKind::Type, h);
    PredKey key = pred_key(*h);
    if (is_protected(key))
        return abort_error(ErrorKind::Type, pred_indicator(key));

    const std::vector<ClausePtr>* list = db_.request_clauses(key);
    if (!list)
        return Step::Backtrack;
    // Deterministic: removes the first matching clause, keeping the match
    // bindings; session clauses only, the shared base stays untouched.
    std::vector<ClausePtr> snapshot = *list;
    for (const ClausePtr& clause : snapshot) {
        std::size_t mark = store_.mark();
        std::unordered_map<std::uint64_t, TermPtr> map;
        TermPtr ch = rename_fresh(clause->head, map);
        TermPtr cb = rename_fresh(clause->body, map);
        if (unify(head, ch, store_, ctx_.occurs_check) &&
            unify(body, cb, store_, ctx_.occurs_check)) {
            db_.retract(key, clause);
            return Step::Continue;
        }
        store_.undo_to(mark);
    }
    return Step::Backtrack;
}

} // namespace

SolveOutcome solve(const TermPtr& goal, Database& db, SolveContext& ctx) {
    std::uint64_t local_budget = 1'000'000;
    SolveContext effective = ctx;
    if (!effective.budget)
        effective.budget = &local_budget;
    Machine machine(db, effective);
    return machine.run(goal);
}

SolveOutcome solve(const TermPtr& goal, Database& db, std::uint64_t budget,
                   std::string* sink) {
    SolveContext ctx;
    ctx.sink = sink;
    ctx.budget = &budget;
    return solve(goal, db, ctx);
}

} // namespace psp::prolog
