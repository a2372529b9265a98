#include "rcv/jsonio.hpp"

#include <algorithm>

namespace rcv {

using nlohmann::json;

json type_json(const Type& t) {
    switch (t.kind()) {
        case TypeKind::Bool: return {{"kind", "bool"}};
        case TypeKind::Int: return {{"kind", "int"}};
        case TypeKind::Enum:
            return {{"kind", "enum"}, {"name", t.name()}, {"constructors", t.constructors()}};
        case TypeKind::Seq: return {{"kind", "seq"}, {"elem", type_json(t.elem())}};
        case TypeKind::Abstract: return {{"kind", "abstract"}, {"name", t.name()}};
    }
    return {};
}

namespace {

const char* bin_name(BinOp op) {
    switch (op) {
        case BinOp::And: return "and";
        case BinOp::Or: return "or";
        case BinOp::Implies: return "implies";
        case BinOp::Eq: return "eq";
        case BinOp::Neq: return "neq";
        case BinOp::Lt: return "lt";
        case BinOp::Le: return "le";
        case BinOp::Add: return "add";
        case BinOp::Sub: return "sub";
        case BinOp::Mul: return "mul";
    }
    return "?";
}

}  // namespace

json expr_json(const Expr& e) {
    const ExprNode& n = e.node();
    switch (n.kind) {
        case ExprKind::Var: return {{"kind", "var"}, {"name", n.name}};
        case ExprKind::IntLit: return {{"kind", "int"}, {"value", n.int_val}};
        case ExprKind::BoolLit: return {{"kind", "bool"}, {"value", n.bool_val}};
        case ExprKind::EnumLit:
            return {{"kind", "ctor"}, {"name", n.name}, {"type", n.type.name()}};
        case ExprKind::EmptySeq: return {{"kind", "empty-seq"}};
        case ExprKind::App: {
            json args = json::array();
            for (const auto& k : n.kids) args.push_back(expr_json(k));
            return {{"kind", "app"}, {"fun", n.name}, {"args", args}};
        }
        case ExprKind::Unary: return {{"kind", "not"}, {"arg", expr_json(n.kids[0])}};
        case ExprKind::Binary:
            return {{"kind", "binary"},
                    {"op", bin_name(n.bin)},
                    {"lhs", expr_json(n.kids[0])},
                    {"rhs", expr_json(n.kids[1])}};
        case ExprKind::Forall:
            return {{"kind", "forall"},
                    {"binder", n.name},
                    {"type", type_json(n.type)},
                    {"body", expr_json(n.kids[0])}};
    }
    return {};
}

json subst_json(const Subst& s) {
    json out = json::object();
    for (const auto& [k, v] : s.entries) out[k] = expr_json(v);
    return out;
}

json prog_json(const RProg& p) {
    const RNode& n = p.node();
    auto branches = [&]() {
        json bs = json::array();
        for (const auto& b : n.branches)
            bs.push_back({{"guard", expr_json(b.guard)}, {"body", prog_json(b.body)}});
        return bs;
    };
    switch (n.kind) {
        case RKind::Miracle: return {{"kind", "miracle"}};
        case RKind::Chaos: return {{"kind", "chaos"}};
        case RKind::Skip: return {{"kind", "skip"}};
        case RKind::Stop: return {{"kind", "stop"}};
        case RKind::Assign: return {{"kind", "assign"}, {"update", subst_json(n.subst)}};
        case RKind::DoSimple: return {{"kind", "event"}, {"chan", n.chan}};
        case RKind::DoOut:
            return {{"kind", "output"}, {"chan", n.chan}, {"value", expr_json(n.cond)}};
        case RKind::DoIn: return {{"kind", "input"}, {"chan", n.chan}, {"var", n.var}};
        case RKind::Guard:
            return {{"kind", "guard"}, {"cond", expr_json(n.cond)}, {"body", prog_json(n.kids[0])}};
        case RKind::Seq:
            return {{"kind", "seq"}, {"fst", prog_json(n.kids[0])}, {"snd", prog_json(n.kids[1])}};
        case RKind::Cond:
            return {{"kind", "cond"},
                    {"cond", expr_json(n.cond)},
                    {"then", prog_json(n.kids[0])},
                    {"else", prog_json(n.kids[1])}};
        case RKind::ExtChoice:
        case RKind::NDChoice: {
            json kids = json::array();
            for (const auto& k : n.kids) kids.push_back(prog_json(k));
            return {{"kind", n.kind == RKind::ExtChoice ? "ext-choice" : "nd-choice"},
                    {"kids", kids}};
        }
        case RKind::Assume: return {{"kind", "assume"}, {"cond", expr_json(n.cond)}};
        case RKind::Alternation: return {{"kind", "alternation"}, {"branches", branches()}};
        case RKind::DoIter: return {{"kind", "iteration"}, {"branches", branches()}};
    }
    return {};
}

json machine_json(const StMach& m) {
    json nodes = json::array();
    for (const auto& n : m.nodes) {
        json e = {{"name", n.name}};
        if (!n.entry.is_skip()) e["entry"] = n.entry.str();
        if (!n.exit.is_skip()) e["exit"] = n.exit.str();
        nodes.push_back(e);
    }
    json trans = json::array();
    for (const auto& t : m.transitions) {
        json e = {{"id", t.id}, {"from", t.src}, {"to", t.tgt}};
        if (t.trigger) e["trigger"] = t.trigger->str();
        if (!is_true(t.cond)) e["condition"] = t.cond.str();
        if (!t.act.is_skip()) e["action"] = t.act.str();
        trans.push_back(e);
    }
    return {{"name", m.name},
            {"initial", m.init},
            {"finals", m.finals},
            {"nodes", nodes},
            {"transitions", trans}};
}

json wf_json(const WfReport& r) {
    json vs = json::array();
    for (const auto& v : r.violations)
        vs.push_back({{"constraint", v.constraint}, {"subject", v.subject}, {"message", v.message}});
    json ws = json::array();
    for (const auto& w : r.warnings)
        ws.push_back({{"code", w.code}, {"subject", w.subject}, {"message", w.message}});
    return {{"ok", r.ok()}, {"violations", vs}, {"warnings", ws}};
}

json rewrite_json(const RewriteResult& r) {
    json trace = json::array();
    for (const auto& app : r.trace)
        trace.push_back({{"rule", rule_name(app.rule)}, {"path", app.path}});
    return {{"program", to_text(r.program)}, {"steps", trace}};
}

json observation_json(const Observation& o) {
    json trace = json::array();
    for (const auto& e : o.trace) trace.push_back(e.str());
    json refusal = json::array();
    for (const auto& e : o.refusal) refusal.push_back(e.str());
    json out = {{"trace", trace}, {"refusal", refusal}, {"status", obs_status_name(o.status)}};
    if (o.final_state) {
        json st = json::object();
        for (const auto& [k, v] : *o.final_state) st[k] = v.str();
        out["state"] = st;
    }
    return out;
}

json deadlock_json(const DeadlockResult& d) {
    json trace = json::array();
    for (const auto& e : d.trace) trace.push_back(e.str());
    json st = json::object();
    for (const auto& [k, v] : d.config.state) st[k] = v.str();
    json init = json::object();
    for (const auto& [k, v] : d.initial) init[k] = v.str();
    return {{"trace", trace}, {"state", st}, {"initial", init}};
}

json report_json(const Report& r) {
    json obs = json::array();
    for (const auto& res : r.obligations) {
        json binders = json::array();
        for (const auto& b : res.obligation.binders)
            binders.push_back({{"name", b.name}, {"type", type_json(b.type)}});
        const char* verdict = res.decision.verdict == Decision::Verdict::Valid     ? "valid"
                              : res.decision.verdict == Decision::Verdict::Invalid ? "refuted"
                                                                                   : "unknown";
        json e = {{"id", res.obligation.id},
                  {"origin", res.obligation.origin},
                  {"binders", binders},
                  {"body", res.obligation.body.str()},
                  {"verdict", verdict},
                  {"procedure", res.decision.procedure}};
        if (!res.decision.witness.empty()) e["witness"] = res.decision.witness;
        if (!res.smt.empty()) e["smt"] = res.smt;
        obs.push_back(e);
    }
    const char* outcome = r.outcome == Report::Outcome::Verified  ? "verified"
                          : r.outcome == Report::Outcome::Refuted ? "refuted"
                                                                  : "residual";
    return {{"machine", r.machine},
            {"property", r.property_text},
            {"outcome", outcome},
            {"obligations", obs}};
}

Value value_from_json(const Type& t, const json& j) {
    switch (t.kind()) {
        case TypeKind::Bool:
            if (j.is_boolean()) return Value::boolean(j.get<bool>());
            break;
        case TypeKind::Int:
            if (j.is_number_integer()) return Value::integer(j.get<std::int64_t>());
            break;
        case TypeKind::Enum:
            if (j.is_string()) {
                std::string c = j.get<std::string>();
                const auto& cs = t.constructors();
                if (std::find(cs.begin(), cs.end(), c) == cs.end())
                    throw ConfigError("'" + c + "' is not a constructor of " + t.name());
                return Value::enum_v(t.name(), c);
            }
            break;
        case TypeKind::Abstract:
            if (j.is_number_integer()) return Value::token_v(t.name(), j.get<int>());
            break;
        case TypeKind::Seq:
            if (j.is_array()) {
                std::vector<Value> elems;
                for (const auto& e : j) elems.push_back(value_from_json(t.elem(), e));
                return Value::seq_v(std::move(elems));
            }
            break;
    }
    throw ConfigError("cannot decode " + j.dump() + " at type " + t.str());
}

FunTable table_from_json(const FunSig& sig, const json& j) {
    FunTable tab;
    if (j.contains("entries")) {
        for (const auto& e : j.at("entries")) {
            const auto& args = e.at("args");
            if (!args.is_array() || args.size() != sig.params.size())
                throw ConfigError("table entry arity mismatch: " + e.dump());
            std::vector<Value> as;
            for (std::size_t k = 0; k < sig.params.size(); ++k)
                as.push_back(value_from_json(sig.params[k], args[k]));
            tab.entries.push_back({std::move(as), value_from_json(sig.result, e.at("result"))});
        }
    }
    if (j.contains("default")) tab.fallback = value_from_json(sig.result, j.at("default"));
    return tab;
}

}  // namespace rcv
