#include <doctest.h>

#include <string>

#include "gen.hpp"
#include "rcv/oracle.hpp"

using namespace rcv;
using rcvtest::Gen;

namespace {

DomainSpec law_domain(const TypeEnv& env) {
    DomainSpec dom = DomainSpec::defaults_for(env, 11);
    dom.int_hi = 2;  // keep the valuation cross product explorable
    return dom;
}

std::string mismatch(const char* what, const RProg& lhs, const RProg& rhs,
                     const EquivResult& eq) {
    return std::string(what) + ": " + to_text(lhs) + "  vs  " + to_text(rhs) + "  (" +
           eq.describe() + ")";
}

}  // namespace

TEST_CASE("every catalogued law preserves stateful failures on generated instances") {
    TypeEnv env = rcvtest::play_env();
    DomainSpec dom = law_domain(env);
    const auto& rules = rcvtest::rule_catalogue();
    REQUIRE(rules.size() == 25);

    int checked = 0;
    for (std::size_t r = 0; r < rules.size(); ++r) {
        Gen g(4101 + 97 * r);
        for (int i = 0; i < 12; ++i) {
            auto [lhs, rhs] = rcvtest::law_instance(g, rules[r]);
            EquivResult eq = equiv(env, dom, lhs, rhs, 4);
            CHECK_MESSAGE(eq.equal, mismatch(rule_name(rules[r]), lhs, rhs, eq));
            ++checked;
        }
    }
    CHECK(checked == 300);
}

TEST_CASE("near miss transformations are refuted, so the oracle has teeth") {
    TypeEnv env = rcvtest::play_env();
    DomainSpec dom = law_domain(env);

    // Pushing an update past an input that overwrites the same variable.
    Subst s{{"y", Expr::int_lit(0)}};
    CHECK_FALSE(equiv(env, dom, seqr(assignr(s), do_in("e", "y")),
                      seqr(do_in("e", "y"), assignr(s)), 4)
                    .equal);
    // Dropping a guard.
    CHECK_FALSE(equiv(env, dom, guardr(Expr::var("b"), do_simple("a")), do_simple("a"), 4)
                    .equal);
    // Conflating the two choices.
    RProg l = do_simple("a"), r = do_out("e", Expr::int_lit(0));
    CHECK_FALSE(equiv(env, dom, ext_choice({l, r}), nd_choice({l, r}), 4).equal);
}

TEST_CASE("simplification preserves stateful failures on random programs") {
    TypeEnv env = rcvtest::play_env();
    DomainSpec dom = law_domain(env);
    Gen g(20260825);

    for (int i = 0; i < 240; ++i) {
        RProg p = rcvtest::gen_prog(g, 3);
        RewriteResult r = simplify(p);
        EquivResult eq = equiv(env, dom, p, r.program, 4);
        CHECK_MESSAGE(eq.equal, mismatch("simplify", p, r.program, eq));

        // Exhaustive rewriting lands on a fixed point.
        RewriteResult again = simplify(r.program);
        CHECK(again.trace.empty());
        CHECK(again.program == r.program);
    }
}
