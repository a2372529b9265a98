#include <doctest.h>

#include "gen.hpp"
#include "rcv/rprog.hpp"
#include "support.hpp"

using namespace rcv;

TEST_CASE("single line rendering of every node form") {
    Expr b = Expr::var("b");
    CHECK(to_text(skipr()) == "Skip");
    CHECK(to_text(stopr()) == "Stop");
    CHECK(to_text(miracle()) == "Miracle");
    CHECK(to_text(chaos()) == "Chaos");
    CHECK(to_text(assignr(Subst{{"x", Expr::int_lit(2)}, {"y", Expr::int_lit(3)}})) ==
          "<x := 2, y := 3>");
    CHECK(to_text(do_simple("a")) == "a");
    CHECK(to_text(do_out("e", Expr::bin(BinOp::Add, Expr::var("x"), Expr::var("y")))) ==
          "e!(x + y)");
    CHECK(to_text(do_out("e", Expr::var("x"))) == "e!x");
    CHECK(to_text(do_in("e", "x")) == "e?x");
    CHECK(to_text(guardr(b, do_simple("a"))) == "b |> a");
    CHECK(to_text(seqr(do_simple("a"), skipr())) == "a ; Skip");
    CHECK(to_text(condr(do_simple("a"), b, stopr())) == "a <| b |> Stop");
    CHECK(to_text(ext_choice({do_simple("a"), do_simple("c")})) == "a [] c");
    CHECK(to_text(nd_choice({do_simple("a"), do_simple("c")})) == "a |~| c");
    CHECK(to_text(assumer(b)) == "[b]");
    CHECK(to_text(alternation({{b, do_simple("a")}, {!b, do_simple("c")}})) ==
          "if b -> a | not b -> c fi");
    CHECK(to_text(do_iter({{b, do_simple("a")}})) == "do b -> a od");
}

TEST_CASE("smart constructors collapse the degenerate shapes") {
    Expr b = Expr::var("b");
    CHECK(gcmd(b, skipr()).kind() == RKind::Assume);
    CHECK(to_text(gcmd(b, skipr())) == "[b]");
    CHECK(to_text(gcmd(b, do_simple("a"))) == "a <| b |> Miracle");
    CHECK(alternation({}).kind() == RKind::Chaos);
    CHECK(alternation({{b, do_simple("a")}}).kind() == RKind::Alternation);
    CHECK(seq_of({}).kind() == RKind::Skip);
    CHECK(to_text(seq_of({do_simple("a"), do_simple("c"), skipr()})) == "a ; c ; Skip");
}

TEST_CASE("the dedup key separates exactly the structurally distinct programs") {
    rcvtest::Gen g(17);
    for (int i = 0; i < 60; ++i) {
        RProg p = rcvtest::gen_prog(g, 3);
        RProg q = rcvtest::gen_prog(g, 3);
        CHECK(p == p);
        CHECK(to_key(p) == to_key(p));
        CHECK((p == q) == (to_key(p) == to_key(q)));
    }
}

TEST_CASE("communication before termination is checked per path") {
    Expr b = Expr::var("b");
    CHECK(communicates_before_term(do_simple("a")));
    CHECK(communicates_before_term(do_out("e", Expr::var("x"))));
    CHECK(communicates_before_term(do_in("e", "x")));
    CHECK(!communicates_before_term(skipr()));
    CHECK(!communicates_before_term(assignr(Subst{{"x", Expr::int_lit(1)}})));
    CHECK(communicates_before_term(seqr(skipr(), do_simple("a"))));
    CHECK(communicates_before_term(seqr(do_simple("a"), skipr())));
    CHECK(!communicates_before_term(condr(do_simple("a"), b, skipr())));
    CHECK(communicates_before_term(condr(do_simple("a"), b, do_simple("c"))));
    CHECK(!communicates_before_term(ext_choice({do_simple("a"), skipr()})));
    CHECK(communicates_before_term(ext_choice({do_simple("a"), do_simple("c")})));
    // Stop never terminates, so it vacuously communicates first
    CHECK(communicates_before_term(stopr()));
    CHECK(communicates_before_term(guardr(b, do_simple("a"))));
}

TEST_CASE("iteration requires productive branches") {
    Expr b = Expr::var("b");
    CHECK_THROWS_AS(do_iter({{b, skipr()}}), std::invalid_argument);
    CHECK_THROWS_AS(do_iter({{b, assignr(Subst{{"x", Expr::int_lit(1)}})}}),
                    std::invalid_argument);
    CHECK_NOTHROW(do_iter({{b, seqr(do_simple("a"), skipr())}}));
    CHECK_NOTHROW(do_iter_raw({{b, skipr()}}));
}

TEST_CASE("frame extension qualifies state variables and nothing else") {
    TypeEnv env;
    env.declare_var("x", Type::integer());
    env.declare_const("k", Type::integer());
    env.declare_event("e", Type::integer());

    RProg p = seqr(assignr(Subst{{"x", Expr::bin(BinOp::Add, Expr::var("x"), Expr::var("k"))}}),
                   do_out("e", Expr::var("x")));
    RProg framed = frame_extend(p, env);
    CHECK(to_text(framed) == "r:x := r:x + k ; e!r:x");
    CHECK(unqualify(framed) == p);

    CHECK(to_text(frame_extend(do_in("e", "x"), env)) == "e?r:x");
    CHECK(frame_extend_expr(parse_expr(env, "x = k"), env).str() == "r:x = k");

    RProg touches_control = assignr(Subst{{kActv, Expr::var("x")}});
    CHECK_THROWS_AS(frame_extend(touches_control, env), TypeError);
}

TEST_CASE("frame extension round trips over generated programs") {
    rcvtest::Gen g(23);
    TypeEnv env = rcvtest::play_env();
    for (int i = 0; i < 80; ++i) {
        RProg p = rcvtest::gen_prog(g, 3);
        RProg framed = frame_extend(p, env);
        CAPTURE(to_text(p));
        CHECK(unqualify(framed) == p);
    }
}

TEST_CASE("assignments render bare for one target, bracketed for several") {
    CHECK(to_text(assignr(Subst{{"x", Expr::int_lit(0)}})) == "x := 0");
    CHECK(to_text(assignr(Subst{{"x", Expr::int_lit(0)}, {"y", Expr::var("x")}})) ==
          "<x := 0, y := x>");
}

TEST_CASE("pretty rendering splits sequences and iteration branches") {
    RProg p = seqr(assignr(Subst{{"x", Expr::int_lit(0)}}),
                   do_iter({{Expr::var("b"), seqr(do_simple("a"), skipr())}}));
    std::string text = to_text_pretty(p);
    CHECK(text.find("x := 0 ;\n") != std::string::npos);
    CHECK(text.find("do b -> a ; Skip\nod") != std::string::npos);
}
