#pragma once

// Deterministic generators for the property suites. All draws go through a
// seeded mt19937_64 with raw modulo, so every run sees the same cases.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rcv/machine.hpp"
#include "rcv/rewrite.hpp"
#include "rcv/rprog.hpp"

namespace rcvtest {

struct Gen {
    std::mt19937_64 rng;

    explicit Gen(std::uint64_t seed) : rng(seed) {}

    int pick(int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }
    bool flip() { return pick(2) == 0; }
};

inline rcv::Type dir_type() { return rcv::Type::enumeration("Dir", {"left", "right"}); }

// Shared playground: two ints, two bools, one enumeration, one bare event and
// one int-carrying event.
inline rcv::TypeEnv play_env() {
    rcv::TypeEnv env;
    env.declare_type("Dir", dir_type());
    env.declare_var("x", rcv::Type::integer());
    env.declare_var("y", rcv::Type::integer());
    env.declare_var("b", rcv::Type::boolean());
    env.declare_var("c", rcv::Type::boolean());
    env.declare_var("d", dir_type());
    env.declare_event("a", std::nullopt);
    env.declare_event("e", rcv::Type::integer());
    return env;
}

inline rcv::Expr gen_int_expr(Gen& g, int depth) {
    using rcv::Expr;
    if (depth <= 0 || g.pick(3) == 0) {
        switch (g.pick(4)) {
            case 0: return Expr::var("x");
            case 1: return Expr::var("y");
            default: return Expr::int_lit(g.pick(3));
        }
    }
    rcv::BinOp op = std::vector{rcv::BinOp::Add, rcv::BinOp::Sub,
                                rcv::BinOp::Mul}[g.pick(3)];
    return Expr::bin(op, gen_int_expr(g, depth - 1), gen_int_expr(g, depth - 1));
}

inline rcv::Expr gen_dir_expr(Gen& g) {
    if (g.flip()) return rcv::Expr::var("d");
    return rcv::Expr::enum_lit(dir_type(), g.flip() ? "left" : "right");
}

inline rcv::Expr gen_bool_expr(Gen& g, int depth) {
    using rcv::BinOp;
    using rcv::Expr;
    if (depth <= 0 || g.pick(3) == 0) {
        switch (g.pick(4)) {
            case 0: return Expr::var("b");
            case 1: return Expr::var("c");
            default: return Expr::bool_lit(g.flip());
        }
    }
    switch (g.pick(7)) {
        case 0: return Expr::un(rcv::UnOp::Not, gen_bool_expr(g, depth - 1));
        case 1:
            return Expr::bin(BinOp::And, gen_bool_expr(g, depth - 1),
                             gen_bool_expr(g, depth - 1));
        case 2:
            return Expr::bin(BinOp::Or, gen_bool_expr(g, depth - 1),
                             gen_bool_expr(g, depth - 1));
        case 3:
            return Expr::bin(BinOp::Implies, gen_bool_expr(g, depth - 1),
                             gen_bool_expr(g, depth - 1));
        case 4:
            return Expr::bin(BinOp::Eq, gen_int_expr(g, depth - 1),
                             gen_int_expr(g, depth - 1));
        case 5:
            return Expr::bin(g.flip() ? BinOp::Lt : BinOp::Le, gen_int_expr(g, depth - 1),
                             gen_int_expr(g, depth - 1));
        default: return Expr::bin(BinOp::Eq, gen_dir_expr(g), gen_dir_expr(g));
    }
}

inline rcv::Subst gen_subst(Gen& g) {
    rcv::Subst s;
    int n = 1 + g.pick(2);
    for (int i = 0; i < n; ++i) {
        switch (g.pick(4)) {
            case 0: s.entries["x"] = gen_int_expr(g, 2); break;
            case 1: s.entries["y"] = gen_int_expr(g, 2); break;
            case 2: s.entries["b"] = gen_bool_expr(g, 2); break;
            default: s.entries["d"] = gen_dir_expr(g); break;
        }
    }
    return s;
}

inline rcv::RProg gen_event(Gen& g) {
    switch (g.pick(3)) {
        case 0: return rcv::do_simple("a");
        case 1: return rcv::do_out("e", gen_int_expr(g, 2));
        default: return rcv::do_in("e", g.flip() ? "x" : "y");
    }
}

inline rcv::RProg gen_prog(Gen& g, int depth) {
    using namespace rcv;
    if (depth <= 0 || g.pick(4) == 0) {
        switch (g.pick(8)) {
            case 0: return skipr();
            case 1: return stopr();
            case 2: return assignr(gen_subst(g));
            case 3: return miracle();
            case 4: return chaos();
            default: return gen_event(g);
        }
    }
    switch (g.pick(8)) {
        case 0: return seqr(gen_prog(g, depth - 1), gen_prog(g, depth - 1));
        case 1: return guardr(gen_bool_expr(g, 2), gen_prog(g, depth - 1));
        case 2:
            return condr(gen_prog(g, depth - 1), gen_bool_expr(g, 2), gen_prog(g, depth - 1));
        case 3: return ext_choice({gen_prog(g, depth - 1), gen_prog(g, depth - 1)});
        case 4: return nd_choice({gen_prog(g, depth - 1), gen_prog(g, depth - 1)});
        case 5: return assumer(gen_bool_expr(g, 2));
        case 6: {
            std::vector<Branch> bs;
            int n = 1 + g.pick(2);
            for (int i = 0; i < n; ++i)
                bs.push_back({gen_bool_expr(g, 2), gen_prog(g, depth - 1)});
            return alternation(std::move(bs));
        }
        default: return seqr(gen_event(g), gen_prog(g, depth - 1));
    }
}

// Initially communicating: the first step is always an event.
inline rcv::RProg gen_comm_prog(Gen& g, int depth) {
    return rcv::seqr(gen_event(g), gen_prog(g, depth - 1));
}

// One generated instance of one catalogued law: lhs is the redex pattern,
// rhs the contractum as the catalogue states it.
inline std::pair<rcv::RProg, rcv::RProg> law_instance(Gen& g, rcv::RuleId id) {
    using namespace rcv;
    Expr b = gen_bool_expr(g, 2);
    RProg p = gen_prog(g, 2);
    RProg q = gen_prog(g, 2);
    Subst s = gen_subst(g);
    switch (id) {
        case RuleId::MIRACLE_LEFT_ANNIHIL: return {seqr(miracle(), p), miracle()};
        case RuleId::SKIP_UNIT_LEFT: return {seqr(skipr(), p), p};
        case RuleId::SKIP_UNIT_RIGHT: return {seqr(p, skipr()), p};
        case RuleId::SEQ_ASSOC: {
            RProg r = gen_prog(g, 2);
            return {seqr(seqr(p, q), r), seqr(p, seqr(q, r))};
        }
        case RuleId::GUARD_TRUE: return {guardr(Expr::bool_lit(true), p), p};
        case RuleId::GUARD_FALSE: return {guardr(Expr::bool_lit(false), p), stopr()};
        case RuleId::COND_TRUE: return {condr(p, Expr::bool_lit(true), q), p};
        case RuleId::COND_FALSE: return {condr(p, Expr::bool_lit(false), q), q};
        case RuleId::ALT_EMPTY: return {alternation_node({}), chaos()};
        case RuleId::ALT_SINGLE: return {alternation_node({{b, p}}), condr(p, b, chaos())};
        case RuleId::ALT_COVERED: {
            Expr b2 = gen_bool_expr(g, 2);
            RProg lhs = seqr(assumer(Expr::bin(BinOp::Or, b, b2)),
                             alternation_node({{b, p}, {b2, q}}));
            RProg rhs = nd_choice({gcmd(b, p), gcmd(b2, q)});
            return {lhs, rhs};
        }
        case RuleId::ASSIGN_COMPOSE: {
            Subst r = gen_subst(g);
            return {seqr(assignr(s), assignr(r)), assignr(subst_compose(r, s))};
        }
        case RuleId::ASSIGN_PUSH_EVENT:
            // Simple events only: inputs keep pending updates in front.
            return {seqr(assignr(s), do_simple("a")), seqr(do_simple("a"), assignr(s))};
        case RuleId::ASSIGN_PUSH_OUT: {
            Expr v = gen_int_expr(g, 2);
            return {seqr(assignr(s), do_out("e", v)),
                    seqr(do_out("e", subst_apply(s, v)), assignr(s))};
        }
        case RuleId::ASSIGN_PUSH_GUARD:
            return {seqr(assignr(s), guardr(b, p)),
                    guardr(subst_apply(s, b), seqr(assignr(s), p))};
        case RuleId::ASSIGN_PUSH_ASSUME:
            return {seqr(assignr(s), assumer(b)),
                    seqr(assumer(subst_apply(s, b)), assignr(s))};
        case RuleId::ASSIGN_PUSH_COND:
            return {seqr(assignr(s), condr(p, b, q)),
                    condr(seqr(assignr(s), p), subst_apply(s, b), seqr(assignr(s), q))};
        case RuleId::ASSIGN_PUSH_EXTCHOICE:
            return {seqr(assignr(s), ext_choice({p, q})),
                    ext_choice({seqr(assignr(s), p), seqr(assignr(s), q)})};
        case RuleId::ASSIGN_PUSH_NDCHOICE:
            return {seqr(assignr(s), nd_choice({p, q})),
                    nd_choice({seqr(assignr(s), p), seqr(assignr(s), q)})};
        case RuleId::ASSIGN_PUSH_ALT: {
            Expr b2 = gen_bool_expr(g, 2);
            RProg lhs = seqr(assignr(s), alternation_node({{b, p}, {b2, q}}));
            RProg rhs = alternation_node(
                {{subst_apply(s, b), seqr(assignr(s), p)},
                 {subst_apply(s, b2), seqr(assignr(s), q)}});
            return {lhs, rhs};
        }
        case RuleId::ASSIGN_PUSH_STOP: return {seqr(assignr(s), stopr()), stopr()};
        case RuleId::ASSIGN_PUSH_CHAOS: return {seqr(assignr(s), chaos()), chaos()};
        case RuleId::ASSIGN_PUSH_MIRACLE: return {seqr(assignr(s), miracle()), miracle()};
        case RuleId::EXTCHOICE_LEFT_DIST: {
            RProg cp = gen_comm_prog(g, 2);
            RProg cq = gen_comm_prog(g, 2);
            RProg r = gen_prog(g, 2);
            return {seqr(ext_choice({cp, cq}), r),
                    ext_choice({seqr(cp, r), seqr(cq, r)})};
        }
        case RuleId::CONST_FOLD: {
            Expr raw = Expr::bin(BinOp::And,
                                 eq(Expr::int_lit(1 + g.pick(2)), Expr::int_lit(1)), b);
            return {guardr(raw, p), guardr(constant_fold(raw), p)};
        }
    }
    return {skipr(), skipr()};
}

inline const std::vector<rcv::RuleId>& rule_catalogue() {
    using rcv::RuleId;
    static const std::vector<RuleId> all = {
        RuleId::MIRACLE_LEFT_ANNIHIL, RuleId::SKIP_UNIT_LEFT,   RuleId::SKIP_UNIT_RIGHT,
        RuleId::SEQ_ASSOC,            RuleId::GUARD_TRUE,       RuleId::GUARD_FALSE,
        RuleId::COND_TRUE,            RuleId::COND_FALSE,       RuleId::ALT_EMPTY,
        RuleId::ALT_SINGLE,           RuleId::ALT_COVERED,      RuleId::ASSIGN_COMPOSE,
        RuleId::ASSIGN_PUSH_EVENT,    RuleId::ASSIGN_PUSH_OUT,  RuleId::ASSIGN_PUSH_GUARD,
        RuleId::ASSIGN_PUSH_ASSUME,   RuleId::ASSIGN_PUSH_COND, RuleId::ASSIGN_PUSH_EXTCHOICE,
        RuleId::ASSIGN_PUSH_NDCHOICE, RuleId::ASSIGN_PUSH_ALT,  RuleId::ASSIGN_PUSH_STOP,
        RuleId::ASSIGN_PUSH_CHAOS,    RuleId::ASSIGN_PUSH_MIRACLE,
        RuleId::EXTCHOICE_LEFT_DIST,  RuleId::CONST_FOLD,
    };
    return all;
}

// ---------------------------------------------------------------------------
// Random machines, well formed by construction
// ---------------------------------------------------------------------------

inline rcv::Action gen_action(Gen& g, const std::vector<std::string>& int_vars,
                              const std::vector<std::string>& out_events, int depth) {
    using rcv::Action;
    if (depth <= 0 || g.pick(3) == 0) {
        switch (g.pick(4)) {
            case 0: return Action::skip();
            case 1:
            case 2:
                return Action::assign(int_vars[g.pick((int)int_vars.size())],
                                      gen_int_expr(g, 2));
            default:
                if (out_events.empty()) return Action::skip();
                return Action::event(rcv::EventRef::output(
                    out_events[g.pick((int)out_events.size())], gen_int_expr(g, 2)));
        }
    }
    if (g.flip())
        return Action::seq(gen_action(g, int_vars, out_events, depth - 1),
                           gen_action(g, int_vars, out_events, depth - 1));
    return Action::cond(gen_bool_expr(g, 2),
                        gen_action(g, int_vars, out_events, depth - 1),
                        gen_action(g, int_vars, out_events, depth - 1));
}

// Machines over x, y : int and b, c : bool with a mix of plain and payload
// events. Structurally valid: distinct node names, declared non-final init,
// transitions leave non-final declared sources and hit declared targets.
inline rcv::StMach gen_machine(Gen& g, int index) {
    using namespace rcv;
    StMach m;
    m.name = "Rand" + std::to_string(index);
    m.env.declare_type("Dir", dir_type());
    m.env.declare_var("x", Type::integer());
    m.env.declare_var("y", Type::integer());
    m.env.declare_var("b", Type::boolean());
    m.env.declare_var("c", Type::boolean());
    m.env.declare_var("d", dir_type());
    m.env.declare_event("a", std::nullopt);
    m.env.declare_event("e", Type::integer());
    m.env.declare_event("out", Type::integer());

    std::vector<std::string> int_vars = {"x", "y"};
    std::vector<std::string> out_events = {"out", "e"};

    int nn = 2 + g.pick(4);
    for (int i = 0; i < nn; ++i) {
        NodeDecl n;
        n.name = "N" + std::to_string(i);
        if (g.pick(3) == 0) n.entry = gen_action(g, int_vars, out_events, 2);
        if (g.pick(4) == 0) n.exit = gen_action(g, int_vars, out_events, 1);
        m.nodes.push_back(std::move(n));
    }
    m.init = "N0";
    for (int i = 1; i < nn; ++i)
        if (g.pick(4) == 0) m.finals.push_back("N" + std::to_string(i));

    std::vector<std::string> sources;
    for (const auto& n : m.nodes) {
        bool fin = false;
        for (const auto& f : m.finals) fin = fin || f == n.name;
        if (!fin) sources.push_back(n.name);
    }
    int nt = 1 + g.pick(7);
    for (int i = 0; i < nt; ++i) {
        TransDecl t;
        t.id = "t" + std::to_string(i);
        t.src = sources[g.pick((int)sources.size())];
        t.tgt = m.nodes[g.pick(nn)].name;
        switch (g.pick(4)) {
            case 0: break;  // no trigger
            case 1: t.trigger = EventRef::simple("a"); break;
            case 2: t.trigger = EventRef::input("e", int_vars[g.pick(2)]); break;
            default:
                t.trigger = EventRef::output("out", gen_int_expr(g, 2));
                break;
        }
        if (g.flip()) t.cond = gen_bool_expr(g, 2);
        if (g.pick(3) == 0) t.act = gen_action(g, int_vars, out_events, 2);
        m.transitions.push_back(std::move(t));
    }
    return m;
}

}  // namespace rcvtest
