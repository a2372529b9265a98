#include <doctest.h>

#include <map>

#include "rcv/parser.hpp"
#include "rcv/smtcheck.hpp"
#include "rcv/verify.hpp"
#include "support.hpp"

using namespace rcv;

namespace {

using Row = std::tuple<Decision::Verdict, std::string, std::string>;

std::map<std::string, Row> decide_all(const CompiledMachine& cm, const Property& p) {
    std::map<std::string, Row> out;
    for (const auto& ob : gen_obligations(cm, p)) {
        Decision d = decide(cm.base_env, ob);
        out[ob.id] = {d.verdict, d.procedure, d.witness};
    }
    return out;
}

constexpr auto kValid = Decision::Verdict::Valid;
constexpr auto kInvalid = Decision::Verdict::Invalid;
constexpr auto kUnknown = Decision::Verdict::Unknown;

}  // namespace

TEST_CASE("deadlock obligations cover initialisation and every non final node") {
    CompiledMachine cm = machine_sem(rcvtest::load_model("gas_analysis.rcsm"));
    auto obs = gen_obligations(cm, Property::deadlock_freedom());
    REQUIRE(obs.size() == 6);

    CHECK(obs[0].id == "init");
    CHECK(obs[0].node.empty());
    CHECK(obs[0].origin == "initialisation reaches an active node");
    CHECK(obs[0].body.str() ==
          "InitJunction = InitJunction or InitJunction = NoGas or "
          "InitJunction = Analysis or InitJunction = GasDetected or "
          "InitJunction = Reading");

    CHECK(obs[3].id == "Analysis");
    CHECK(obs[3].origin == "node Analysis enables a transition in every stable state");
    CHECK(obs[3].body.str() == "analysis(gs) = noGas or analysis(gs) = gasD");
    CHECK(obs[4].body.str() ==
          "goreq(intensity(gs), thr) or not goreq(intensity(gs), thr)");
    for (const auto& ob : obs) CHECK(ob.binders.empty());
}

TEST_CASE("the gas machine is deadlock free by layered deciding") {
    CompiledMachine cm = machine_sem(rcvtest::load_model("gas_analysis.rcsm"));
    auto rows = decide_all(cm, Property::deadlock_freedom());
    REQUIRE(rows.size() == 6);
    CHECK(rows.at("init") == Row{kValid, "folding", ""});
    CHECK(rows.at("InitJunction") == Row{kValid, "folding", ""});
    CHECK(rows.at("NoGas") == Row{kValid, "folding", ""});
    CHECK(rows.at("Reading") == Row{kValid, "folding", ""});
    CHECK(rows.at("Analysis") == Row{kValid, "enum-enumeration", ""});
    CHECK(rows.at("GasDetected") == Row{kValid, "boolean-abstraction", ""});
}

TEST_CASE("a third status value breaks exactly the analysis coverage") {
    CompiledMachine cm = machine_sem(rcvtest::load_model("gas_analysis_3status.rcsm"));
    auto rows = decide_all(cm, Property::deadlock_freedom());
    REQUIRE(rows.size() == 6);
    CHECK(rows.at("Analysis") ==
          Row{kInvalid, "enum-enumeration", "analysis(gs) = lowGas"});
    CHECK(rows.at("init") == Row{kValid, "folding", ""});
    CHECK(rows.at("GasDetected") == Row{kValid, "boolean-abstraction", ""});

    Report r = verify(cm, Property::deadlock_freedom());
    CHECK(r.outcome == Report::Outcome::Refuted);
}

TEST_CASE("entry inputs appear as ghost binders in deadlock obligations") {
    const char* txt =
        "statemachine HavocDemo\n\nvars\n  v : int\n\nevents\n  pull : int\n  tick\n\n"
        "states\n  Pump entry pull?v\n\ninitial Pump\n\ntransitions\n"
        "  t1 from Pump to Pump trigger tick condition v = 0\n";
    CompiledMachine cm = machine_sem(parse(txt));
    auto obs = gen_obligations(cm, Property::deadlock_freedom());
    REQUIRE(obs.size() == 2);
    CHECK(obs[0].body.str() == "Pump = Pump");
    REQUIRE(obs[1].binders.size() == 1);
    CHECK(obs[1].binders[0].name == "v!pre0");
    CHECK(obs[1].binders[0].type == Type::integer());
    CHECK(obs[1].body.str() == "v = 0");

    Decision d = decide(cm.base_env, obs[1]);
    CHECK(d.verdict == kInvalid);
    CHECK(d.procedure == "equality-enumeration");
    CHECK(d.witness == "v = 1");
}

TEST_CASE("invariant obligations do induction over arrivals") {
    StMach two = rcvtest::load_model("two_path_entry.rcsm");
    CompiledMachine cm = machine_sem(two);
    Property p = Property::state_invariant(parse_expr(two.env, "m = 0 or m = 1"));
    auto obs = gen_obligations(cm, p);
    REQUIRE(obs.size() == 3);
    CHECK(obs[0].id == "init");
    CHECK(obs[0].origin == "invariant holds on arrival at S");
    CHECK(obs[0].body.str() == "m = 0 or m = 1");
    CHECK(obs[2].id == "T");
    CHECK(obs[2].body.str() == "m = 0 or m = 1 => true => m = 0 or m = 1");

    auto rows = decide_all(cm, p);
    CHECK(rows.at("init") == Row{kInvalid, "equality-enumeration", "m = 2"});
    CHECK(rows.at("S") == Row{kValid, "folding", ""});
    CHECK(rows.at("T") == Row{kValid, "equality-enumeration", ""});
}

TEST_CASE("entry updates are substituted into the preserved invariant") {
    StMach toggle = rcvtest::load_model("toggle.rcsm");
    CompiledMachine cm = machine_sem(toggle);
    Property p = Property::state_invariant(parse_expr(toggle.env, "b = false"));
    auto obs = gen_obligations(cm, p);
    REQUIRE(obs.size() == 2);
    CHECK(obs[1].body.str() == "b = false => true => not b = false");
    auto rows = decide_all(cm, p);
    CHECK(rows.at("init") == Row{kInvalid, "boolean-abstraction", "b = true"});
    CHECK(rows.at("A") == Row{kInvalid, "boolean-abstraction", "b = false"});
}

TEST_CASE("input triggers quantify the arriving payload") {
    StMach echo = rcvtest::load_model("io_echo.rcsm");
    CompiledMachine cm = machine_sem(echo);
    Property p = Property::state_invariant(parse_expr(echo.env, "x = 0 or not (x = 0)"));
    auto obs = gen_obligations(cm, p);
    REQUIRE(obs.size() == 3);
    REQUIRE(obs[1].node == "Recv");
    REQUIRE(obs[1].binders.size() == 1);
    CHECK(obs[1].binders[0].name == "x2");
    CHECK(obs[1].binders[0].type == Type::integer());
    CHECK(obs[1].body.str() ==
          "x = 0 or not (x = 0) => true => x2 = 0 or not (x2 = 0)");
    auto rows = decide_all(cm, p);
    CHECK(rows.at("init") == Row{kValid, "equality-enumeration", ""});
    CHECK(rows.at("Recv") == Row{kValid, "equality-enumeration", ""});
    CHECK(rows.at("Send") == Row{kValid, "equality-enumeration", ""});
}

TEST_CASE("arithmetic atoms fall through to the residual layer") {
    StMach counter = rcvtest::load_model("counter.rcsm");
    CompiledMachine cm = machine_sem(counter);
    Property p = Property::state_invariant(parse_expr(counter.env, "c <= 3"));
    auto rows = decide_all(cm, p);
    REQUIRE(rows.size() == 2);
    CHECK(rows.at("init") ==
          Row{kUnknown, "smt-residual", "integer order or arithmetic atom c <= 3"});
    CHECK(rows.at("Idle") ==
          Row{kUnknown, "smt-residual", "integer order or arithmetic atom c <= 3"});

    Report r = verify(cm, p);
    CHECK(r.outcome == Report::Outcome::Residual);
    for (const auto& o : r.obligations) {
        CHECK(o.decision.verdict == kUnknown);
        CHECK_FALSE(o.smt.empty());
        CHECK(smt_check(o.smt).ok());
    }
}

TEST_CASE("distinct arguments block the congruence abstraction") {
    TypeEnv env;
    env.declare_var("x", Type::integer());
    env.declare_var("y", Type::integer());
    env.declare_fun("f", FunSig{{Type::integer()}, Type::boolean()});

    Obligation ob;
    ob.id = "adhoc";
    ob.body = parse_expr(env, "f(x) or not f(y)");
    Decision d = decide(env, ob);
    CHECK(d.verdict == kUnknown);
    CHECK(d.procedure == "smt-residual");
    CHECK(d.witness == "function f applied to distinct arguments");

    ob.body = parse_expr(env, "f(x) or not f(x)");
    Decision d2 = decide(env, ob);
    CHECK(d2.verdict == kValid);
    CHECK(d2.procedure == "boolean-abstraction");
}

TEST_CASE("the report lists one line per obligation with the verdict column") {
    CompiledMachine cm = machine_sem(rcvtest::load_model("gas_analysis.rcsm"));
    Report r = verify(cm, Property::deadlock_freedom());
    CHECK(r.outcome == Report::Outcome::Verified);
    std::string txt = report_text(r);
    CHECK(txt.find("machine GasAnalysis  property deadlock-freedom") == 0);
    CHECK(txt.find("  valid    Analysis [enum-enumeration] node Analysis enables a "
                   "transition in every stable state") != std::string::npos);
    CHECK(txt.find("outcome verified (6 obligations: 6 valid, 0 refuted, 0 residual)") !=
          std::string::npos);

    CompiledMachine cm3 = machine_sem(rcvtest::load_model("gas_analysis_3status.rcsm"));
    std::string t3 = report_text(verify(cm3, Property::deadlock_freedom()));
    CHECK(t3.find("  refuted  Analysis [enum-enumeration]") != std::string::npos);
    CHECK(t3.find("           witness: analysis(gs) = lowGas") != std::string::npos);
    CHECK(t3.find("outcome refuted (6 obligations: 5 valid, 1 refuted, 0 residual)") !=
          std::string::npos);

    StMach counter = rcvtest::load_model("counter.rcsm");
    CompiledMachine cmc = machine_sem(counter);
    std::string tc = report_text(
        verify(cmc, Property::state_invariant(parse_expr(counter.env, "c <= 3"))));
    CHECK(tc.find("machine Counter  property invariant c <= 3") == 0);
    CHECK(tc.find("           reason: integer order or arithmetic atom c <= 3") !=
          std::string::npos);
}

TEST_CASE("emitted scripts skolemize binders and declare the used signature") {
    CompiledMachine cm3 = machine_sem(rcvtest::load_model("gas_analysis_3status.rcsm"));
    auto obs = gen_obligations(cm3, Property::deadlock_freedom());

    std::string init_smt = emit_smt(cm3.base_env, obs[0], "GasAnalysis3.init");
    CHECK(init_smt ==
          "; GasAnalysis3.init: initialisation reaches an active node\n"
          "; valid iff unsat\n"
          "(set-logic ALL)\n"
          "(assert (not true))\n"
          "(check-sat)\n");

    std::string smt = emit_smt(cm3.base_env, obs[3], "GasAnalysis3.Analysis");
    CHECK(smt ==
          "; GasAnalysis3.Analysis: node Analysis enables a transition in every stable state\n"
          "; valid iff unsat\n"
          "(set-logic ALL)\n"
          "(declare-sort GasSensor 0)\n"
          "(declare-datatypes ((Status 0)) (((noGas)(gasD)(lowGas))))\n"
          "(declare-sort |Seq.Seq(GasSensor)| 0)\n"
          "(declare-const |empty.Seq(GasSensor)| |Seq.Seq(GasSensor)|)\n"
          "(declare-fun analysis (|Seq.Seq(GasSensor)|) Status)\n"
          "(declare-const gs |Seq.Seq(GasSensor)|)\n"
          "(assert (not (or (= (analysis gs) noGas) (= (analysis gs) gasD))))\n"
          "(check-sat)\n");
    CHECK(smt_check(smt).str() == "ok: 9 commands, 1 assertions");

    StMach echo = rcvtest::load_model("io_echo.rcsm");
    CompiledMachine cme = machine_sem(echo);
    auto obe = gen_obligations(
        cme, Property::state_invariant(parse_expr(echo.env, "x = 0 or not (x = 0)")));
    std::string recv = emit_smt(cme.base_env, obe[1], "Echo.Recv");
    CHECK(recv.find("(declare-const x2 Int)\n(declare-const x Int)") != std::string::npos);
    CHECK(recv.find("(assert (not (=> (or (= x 0) (not (= x 0))) "
                    "(or (= x2 0) (not (= x2 0)))))") != std::string::npos);
    CHECK(smt_check(recv).ok());
}
