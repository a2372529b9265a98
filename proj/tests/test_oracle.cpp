#include <doctest.h>

#include "rcv/oracle.hpp"
#include "rcv/parser.hpp"
#include "support.hpp"

using namespace rcv;

namespace {

TypeEnv play_env() {
    TypeEnv env;
    env.declare_var("x", Type::integer());
    env.declare_event("a", std::nullopt);
    env.declare_event("e", Type::integer());
    return env;
}

}  // namespace

TEST_CASE("values print and order like their carriers") {
    CHECK(Value::integer(7).str() == "7");
    CHECK(Value::boolean(true).str() == "true");
    CHECK(Value::enum_v("Status", "gasD").str() == "gasD");
    CHECK(Value::token_v("GasSensor", 0).str() == "GasSensor#0");
    CHECK(Value::seq_v({Value::integer(1), Value::integer(2)}).str() == "<1,2>");
    CHECK(Value::integer(1) < Value::integer(2));
    CHECK(Value::integer(2) == Value::integer(2));
    CHECK(Value::integer(2) != Value::integer(3));
    CHECK(state_str(State{{"x", Value::integer(0)}}) == "{x=0}");
    CHECK(Event{"e", Value::integer(3)}.str() == "e.3");
    CHECK(Event{"a", std::nullopt}.str() == "a");
    CHECK(trace_str({{"go", std::nullopt}}) == "<go>");
    CHECK(trace_str({}) == "<>");
}

TEST_CASE("hashing matches the fnv1a reference vectors") {
    CHECK(fnv1a64("") == 14695981039346656037ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("the alphabet enumerates payloads in declaration order") {
    DomainSpec dom;
    dom.int_hi = 1;
    std::vector<Event> sigma = alphabet(play_env(), dom);
    REQUIRE(sigma.size() == 3);
    CHECK(sigma[0].str() == "a");
    CHECK(sigma[1].str() == "e.0");
    CHECK(sigma[2].str() == "e.1");
}

TEST_CASE("domain defaults fix constants and enumerate carriers") {
    StMach gas = rcvtest::load_model("gas_analysis.rcsm");
    DomainSpec d = DomainSpec::defaults_for(gas.env, 7);
    CHECK(d.int_lo == 0);
    CHECK(d.int_hi == 3);
    CHECK(d.seq_max == 2);
    CHECK(d.abstract_tokens == 2);
    REQUIRE(d.const_vals.count("thr"));
    CHECK(d.const_vals.at("thr") == Value::integer(0));

    auto st = d.carrier(Type::enumeration("Status", {"noGas", "gasD"}));
    REQUIRE(st.size() == 2);
    CHECK(st[0].str() == "noGas");
    CHECK(st[1].str() == "gasD");
    auto tok = d.carrier(Type::abstract("GasSensor"));
    REQUIRE(tok.size() == 2);
    CHECK(tok[0].str() == "GasSensor#0");
    auto sq = d.carrier(Type::seq(Type::boolean()));
    REQUIRE(sq.size() == 7);
    CHECK(sq[0].str() == "<>");
    CHECK(sq[3].str() == "<false,false>");
    CHECK(sq[6].str() == "<true,true>");
}

TEST_CASE("function symbols are sampled per seed unless tabulated") {
    StMach gas = rcvtest::load_model("gas_analysis.rcsm");
    Value g0 = Value::token_v("GasSensor", 0);

    DomainSpec d7 = DomainSpec::defaults_for(gas.env, 7);
    CHECK(d7.eval_fun(gas.env, "analysis", {g0}).str() == "noGas");
    CHECK(d7.eval_fun(gas.env, "analysis", {g0}) == d7.eval_fun(gas.env, "analysis", {g0}));
    DomainSpec d8 = DomainSpec::defaults_for(gas.env, 8);
    CHECK(d8.eval_fun(gas.env, "analysis", {g0}).str() == "gasD");

    FunTable ft;
    ft.entries.push_back({{g0}, Value::enum_v("Status", "gasD")});
    ft.fallback = Value::enum_v("Status", "noGas");
    d7.fun_tables["analysis"] = ft;
    CHECK(d7.eval_fun(gas.env, "analysis", {g0}).str() == "gasD");
    CHECK(d7.eval_fun(gas.env, "analysis", {Value::token_v("GasSensor", 1)}).str() == "noGas");
}

TEST_CASE("initial valuations cross the carriers in declaration order") {
    StMach m = rcvtest::load_model("two_path_entry.rcsm");
    auto vals = initial_valuations(m.env, DomainSpec::defaults_for(m.env, 0));
    REQUIRE(vals.size() == 8);
    CHECK(state_str(vals.front()) == "{b=false, m=0}");
    CHECK(state_str(vals.back()) == "{b=true, m=3}");
}

TEST_CASE("evaluation handles the expression forms it can and refuses the rest") {
    TypeEnv env = play_env();
    DomainSpec dom;
    State s{{"x", Value::integer(2)}};
    auto ev = [&](const char* t) { return eval_expr(env, dom, s, parse_expr(env, t)); };
    CHECK(ev("x + 1") == Value::integer(3));
    CHECK(ev("x = 2") == Value::boolean(true));
    CHECK(ev("x < 2 or x <= 2") == Value::boolean(true));
    CHECK_THROWS_AS(eval_expr(env, dom, s,
                              Expr::forall("v", Type::integer(), Expr::bool_lit(true))),
                    ConfigError);
    CHECK_THROWS_AS(eval_expr(env, dom, State{}, parse_expr(env, "x + 1")), ConfigError);
}

TEST_CASE("step lists the labeled successors deterministically") {
    TypeEnv env = play_env();
    DomainSpec dom;
    dom.int_hi = 1;

    Config c0{ext_choice({do_simple("a"), do_in("e", "x")}), State{}};
    auto succs = step(env, dom, c0);
    REQUIRE(succs.size() == 3);
    CHECK(succs[0].first.str() == "a");
    CHECK(to_text(succs[0].second.rest) == "Skip");
    CHECK(succs[1].first.str() == "e.0");
    CHECK(state_str(succs[1].second.state) == "{x=0}");
    CHECK(succs[2].first.str() == "e.1");
    CHECK(state_str(succs[2].second.state) == "{x=1}");

    Config c1{do_out("e", parse_expr(env, "x + 1")), State{{"x", Value::integer(0)}}};
    auto out = step(env, dom, c1);
    REQUIRE(out.size() == 1);
    CHECK(out[0].first.str() == "e.1");
    CHECK(state_str(out[0].second.state) == "{x=0}");

    Config c2{guardr(Expr::bool_lit(false), do_simple("a")), State{}};
    CHECK(step(env, dom, c2).empty());

    Config c3{do_in("e", "y"), State{}};
    CHECK_THROWS_AS(step(env, dom, c3), ConfigError);
}

TEST_CASE("stateful failures of an external choice") {
    TypeEnv env = play_env();
    DomainSpec dom;
    dom.int_hi = 1;
    RProg p = ext_choice({do_simple("a"), do_in("e", "x")});

    std::set<Observation> obs = failures_from(env, dom, p, 4, State{});
    std::vector<std::string> got;
    for (const auto& o : obs) got.push_back(o.str());
    REQUIRE(got.size() == 4);
    CHECK(got[0] == "(<>, refusing <>, quiescent)");
    CHECK(got[1] == "(<a>, refusing <a,e.0,e.1>, terminated {})");
    CHECK(got[2] == "(<e.0>, refusing <a,e.0,e.1>, terminated {x=0})");
    CHECK(got[3] == "(<e.1>, refusing <a,e.0,e.1>, terminated {x=1})");

    // The union over both initial valuations of x adds the terminated {x=1}
    // variant of the <a> trace.
    CHECK(failures(env, dom, p, 4).size() == 5);
}

TEST_CASE("failures distinguish termination from deadlock") {
    TypeEnv env;
    env.declare_event("a", std::nullopt);
    DomainSpec dom;
    EquivResult r = equiv(env, dom, skipr(), stopr(), 4);
    CHECK_FALSE(r.equal);
    CHECK(r.side == 2);
    CHECK(r.describe() ==
          "differ at initial {}: observation (<>, refusing <a>, quiescent) only on right");
    EquivResult rr = equiv(env, dom, stopr(), skipr(), 4);
    CHECK(rr.side == 1);
    CHECK(rr.describe() ==
          "differ at initial {}: observation (<>, refusing <a>, quiescent) only on left");
    CHECK(equiv(env, dom, skipr(), skipr(), 4).equal);
}

TEST_CASE("deadlock search returns the shortest witness with its settled state") {
    StMach stuck = rcvtest::load_model("stuck.rcsm");
    auto dl = find_deadlock(machine_sem(stuck), DomainSpec{}, 10);
    REQUIRE(dl.has_value());
    CHECK(trace_str(dl->trace) == "<go>");
    CHECK(state_str(dl->config.state) == "{actv=Pit}");
    CHECK(state_str(dl->initial) == "{actv=Start}");

    StMach ct = rcvtest::load_model("counter_total.rcsm");
    auto dct = find_deadlock(machine_sem(ct), DomainSpec{}, 10);
    REQUIRE(dct.has_value());
    CHECK(trace_str(dct->trace) == "<>");
    CHECK(state_str(dct->config.state) == "{actv=Idle, r:c=3}");

    StMach counter = rcvtest::load_model("counter.rcsm");
    CHECK_FALSE(find_deadlock(machine_sem(counter), DomainSpec{}, 10).has_value());
}

TEST_CASE("the invariant walker reports the arriving transition chain") {
    StMach toggle = rcvtest::load_model("toggle.rcsm");
    DomainSpec dom = DomainSpec::defaults_for(toggle.env, 0);
    Expr inv = parse_expr(toggle.env, "b = false");
    auto v = check_invariant_bounded(toggle, dom, inv, 10);
    REQUIRE(v.has_value());
    CHECK(v->node == "A");
    CHECK(v->steps == std::vector<std::string>{"t1"});
    CHECK(state_str(v->state) == "{b=true}");
    CHECK(state_str(v->initial) == "{b=false}");
    CHECK(v->describe() ==
          "invariant fails on arrival at A with {b=true} (from {b=false}, via t1)");
}

TEST_CASE("an unreachable bound means the invariant holds up to it") {
    StMach counter = rcvtest::load_model("counter.rcsm");
    DomainSpec dom = DomainSpec::defaults_for(counter.env, 0);
    CHECK_FALSE(check_invariant_bounded(counter, dom, parse_expr(counter.env, "c <= 3"), 40)
                    .has_value());
    auto v = check_invariant_bounded(counter, dom, parse_expr(counter.env, "c <= 2"), 40);
    REQUIRE(v.has_value());
    CHECK(v->describe() ==
          "invariant fails on arrival at Idle with {c=3} (from {c=0}, via t1 t1 t1)");
}

TEST_CASE("a bad initial valuation is flagged before any transition") {
    StMach m = rcvtest::load_model("two_path_entry.rcsm");
    DomainSpec dom = DomainSpec::defaults_for(m.env, 0);
    auto v = check_invariant_bounded(m, dom, parse_expr(m.env, "m = 0 or m = 1"), 10);
    REQUIRE(v.has_value());
    CHECK(v->steps.empty());
    CHECK(v->describe() ==
          "invariant fails on arrival at S with {b=false, m=2} "
          "(from {b=false, m=2}, via no transitions)");
}
