#include <doctest.h>

#include "rcv/smtcheck.hpp"

using namespace rcv;

namespace {

std::string diag(const std::string& script) { return smt_check(script).str(); }

}  // namespace

TEST_CASE("well formed scripts summarize command and assertion counts") {
    CHECK(diag("(set-logic ALL)\n(declare-const x Int)\n(assert (= x 0))\n(check-sat)\n") ==
          "ok: 4 commands, 1 assertions");
    CHECK(diag("(set-logic ALL)\n(assert true)\n(check-sat)\n(exit)\n") ==
          "ok: 4 commands, 1 assertions");
    CHECK(diag("(set-logic ALL)\n(assert true)\n(check-sat)\n(get-model)\n") ==
          "ok: 4 commands, 1 assertions");

    SmtCheckResult r =
        smt_check("(set-logic ALL)\n(declare-const x Int)\n(assert (= x 0))\n(check-sat)\n");
    CHECK(r.ok());
    CHECK(r.commands == 4);
    CHECK(r.asserts == 1);
}

TEST_CASE("quoted symbols, quantifiers and datatypes are in the accepted fragment") {
    CHECK(diag("(set-logic ALL)\n(declare-sort |S p| 0)\n(declare-const |a b| |S p|)\n"
               "(assert (= |a b| |a b|))\n(check-sat)\n") == "ok: 5 commands, 1 assertions");
    CHECK(diag("(set-logic ALL)\n(declare-fun f (Int) Int)\n"
               "(assert (forall ((v Int)) (= (f v) v)))\n(check-sat)\n") ==
          "ok: 4 commands, 1 assertions");
    CHECK(diag("(set-logic ALL)\n(declare-datatypes ((Status 0)) (((noGas)(gasD))))\n"
               "(declare-const s Status)\n(assert (= s noGas))\n(check-sat)\n") ==
          "ok: 5 commands, 1 assertions");
}

TEST_CASE("undeclared names and sorts are flagged at their line") {
    CHECK(diag("(set-logic ALL)\n(assert (= x 0))\n(check-sat)\n") ==
          "line 2: symbol 'x' used before declaration");
    CHECK(diag("(set-logic ALL)\n(declare-const x Foo)\n(assert true)\n(check-sat)\n") ==
          "line 2: sort 'Foo' used before declaration");
    CHECK(diag("(set-logic ALL)\n(assert (forall ((v Int)) (= w v)))\n(check-sat)\n") ==
          "line 2: symbol 'w' used before declaration");
    CHECK(diag("(set-logic ALL)\n(declare-const x Int)\n(declare-const x Int)\n"
               "(assert (= x x))\n(check-sat)\n") == "line 3: symbol 'x' declared twice");
}

TEST_CASE("applications are checked against the declared signature") {
    CHECK(diag("(set-logic ALL)\n(declare-fun f (Int) Bool)\n(assert (f 1 2))\n(check-sat)\n") ==
          "line 3: 'f' declared with 1 arguments, applied to 2");
    CHECK(diag("(set-logic ALL)\n(declare-fun f (Int) Bool)\n(assert (f true))\n(check-sat)\n") ==
          "line 3: 'f' argument 1 has sort Bool, declared Int");
    CHECK(diag("(set-logic ALL)\n(declare-const x Int)\n(assert (= x true))\n(check-sat)\n") ==
          "line 3: '=' compares Int with Bool");
    CHECK(diag("(set-logic ALL)\n(declare-const x Int)\n(assert x)\n(check-sat)\n") ==
          "line 3: asserted term has sort Int");
}

TEST_CASE("the command sequence is validated") {
    CHECK(diag("(set-logic ALL)\n(assert true)\n") == "line 1: missing (check-sat)");
    CHECK(diag("(assert true)\n(set-logic ALL)\n(check-sat)\n") ==
          "line 2: (set-logic ...) must be the first command");
    CHECK(diag("(set-logic ALL)\n(check-sat)\n") == "line 1: script asserts nothing");
    CHECK(diag("(set-logic ALL)\n(assert true)\n(check-sat)\n(assert false)\n") ==
          "line 4: command 'assert' after (check-sat)");
    CHECK(diag("(set-logic ALL)\n(assert true)\n(check-sat)\n(check-sat)\n") ==
          "line 4: command 'check-sat' after (check-sat)\nline 4: (check-sat) repeated");
    CHECK(diag("(set-logic ALL)\n(frob x)\n(assert true)\n(check-sat)\n") ==
          "line 2: unknown command 'frob'");
}

TEST_CASE("lexical problems stop the analysis") {
    CHECK(diag("(set-logic ALL)\n(assert (= x 0)\n(check-sat)\n") ==
          "line 2: unbalanced parenthesis: list never closed");
    CHECK(diag("(set-logic ALL))\n(assert true)\n(check-sat)\n") ==
          "line 1: unbalanced parenthesis: stray ')'");
}
