#include "rcv/oracle.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace rcv {

namespace {

struct InternalError : std::runtime_error {
    explicit InternalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace

// -------------------------------------------------------------------------
// Value
// -------------------------------------------------------------------------

Value Value::boolean(bool v) {
    Value r;
    r.kind = Kind::Bool;
    r.b = v;
    return r;
}

Value Value::integer(std::int64_t v) {
    Value r;
    r.kind = Kind::Int;
    r.i = v;
    return r;
}

Value Value::enum_v(std::string type_name, std::string ctor) {
    Value r;
    r.kind = Kind::Enum;
    r.type_name = std::move(type_name);
    r.ctor = std::move(ctor);
    return r;
}

Value Value::token_v(std::string type_name, int idx) {
    Value r;
    r.kind = Kind::Token;
    r.type_name = std::move(type_name);
    r.token = idx;
    return r;
}

Value Value::seq_v(std::vector<Value> elems) {
    Value r;
    r.kind = Kind::Seq;
    r.seq = std::move(elems);
    return r;
}

bool Value::operator==(const Value& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::Bool: return b == o.b;
        case Kind::Int: return i == o.i;
        case Kind::Enum: return type_name == o.type_name && ctor == o.ctor;
        case Kind::Token: return type_name == o.type_name && token == o.token;
        case Kind::Seq: return seq == o.seq;
    }
    return false;
}

bool Value::operator<(const Value& o) const {
    if (kind != o.kind) return kind < o.kind;
    switch (kind) {
        case Kind::Bool: return b < o.b;
        case Kind::Int: return i < o.i;
        case Kind::Enum:
            if (type_name != o.type_name) return type_name < o.type_name;
            return ctor < o.ctor;
        case Kind::Token:
            if (type_name != o.type_name) return type_name < o.type_name;
            return token < o.token;
        case Kind::Seq: return seq < o.seq;
    }
    return false;
}

std::string Value::str() const {
    switch (kind) {
        case Kind::Bool: return b ? "true" : "false";
        case Kind::Int: return std::to_string(i);
        case Kind::Enum: return ctor;
        case Kind::Token: return type_name + "#" + std::to_string(token);
        case Kind::Seq: {
            std::string out = "<";
            for (std::size_t k = 0; k < seq.size(); ++k) {
                if (k) out += ",";
                out += seq[k].str();
            }
            return out + ">";
        }
    }
    return "?";
}

std::string state_str(const State& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& [k, v] : s) {
        if (!first) out += ", ";
        first = false;
        out += k + "=" + v.str();
    }
    return out + "}";
}

bool Event::operator<(const Event& o) const {
    if (chan != o.chan) return chan < o.chan;
    if (payload.has_value() != o.payload.has_value()) return !payload.has_value();
    if (payload && *payload != *o.payload) return *payload < *o.payload;
    return false;
}

std::string Event::str() const {
    if (payload) return chan + "." + payload->str();
    return chan;
}

std::string trace_str(const std::vector<Event>& t) {
    std::string out = "<";
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (k) out += ",";
        out += t[k].str();
    }
    return out + ">";
}

// -------------------------------------------------------------------------
// DomainSpec
// -------------------------------------------------------------------------

std::uint64_t fnv1a64(const std::string& data, std::uint64_t h) {
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<Value> DomainSpec::carrier(const Type& t) const {
    switch (t.kind()) {
        case TypeKind::Bool:
            return {Value::boolean(false), Value::boolean(true)};
        case TypeKind::Int: {
            std::vector<Value> out;
            for (std::int64_t v = int_lo; v <= int_hi; ++v) out.push_back(Value::integer(v));
            if (out.empty()) throw ConfigError("empty integer carrier");
            return out;
        }
        case TypeKind::Enum: {
            std::vector<Value> out;
            for (const auto& c : t.constructors()) out.push_back(Value::enum_v(t.name(), c));
            return out;
        }
        case TypeKind::Abstract: {
            std::vector<Value> out;
            for (int k = 0; k < abstract_tokens; ++k) out.push_back(Value::token_v(t.name(), k));
            if (out.empty()) throw ConfigError("empty abstract carrier");
            return out;
        }
        case TypeKind::Seq: {
            std::vector<Value> elems = carrier(t.elem());
            std::vector<Value> out;
            std::vector<std::vector<Value>> level = {{}};
            out.push_back(Value::seq_v({}));
            for (int len = 1; len <= seq_max; ++len) {
                std::vector<std::vector<Value>> next;
                for (const auto& prefix : level) {
                    for (const auto& e : elems) {
                        auto xs = prefix;
                        xs.push_back(e);
                        out.push_back(Value::seq_v(xs));
                        next.push_back(std::move(xs));
                    }
                }
                level = std::move(next);
            }
            return out;
        }
    }
    throw ConfigError("unknown type kind");
}

DomainSpec DomainSpec::defaults_for(const TypeEnv& env, std::uint64_t seed) {
    DomainSpec d;
    d.seed = seed;
    for (const auto& name : env.const_order) {
        const Type& t = env.consts.at(name);
        auto it = env.const_inits.find(name);
        if (it != env.const_inits.end()) {
            d.const_vals[name] = eval_expr(env, d, {}, it->second);
        } else {
            d.const_vals[name] = d.carrier(t).front();
        }
    }
    return d;
}

Value DomainSpec::eval_fun(const TypeEnv& env, const std::string& fn,
                           const std::vector<Value>& args) const {
    auto sig = env.funs.find(fn);
    if (sig == env.funs.end()) throw ConfigError("unknown function " + fn);
    auto tab = fun_tables.find(fn);
    if (tab != fun_tables.end()) {
        for (const auto& [as, r] : tab->second.entries)
            if (as == args) return r;
        if (tab->second.fallback) return *tab->second.fallback;
        std::string call = fn + "(";
        for (std::size_t k = 0; k < args.size(); ++k)
            call += (k ? "," : "") + args[k].str();
        throw ConfigError("function table for " + fn + " has no entry for " + call + ")");
    }
    std::vector<Value> range = carrier(sig->second.result);
    std::string key = std::to_string(seed) + "|" + fn;
    for (const auto& a : args) key += "|" + a.str();
    return range[fnv1a64(key) % range.size()];
}

// -------------------------------------------------------------------------
// Expression evaluation
// -------------------------------------------------------------------------

Value eval_expr(const TypeEnv& env, const DomainSpec& dom, const State& s, const Expr& e) {
    const ExprNode& n = e.node();
    auto ev = [&](const Expr& x) { return eval_expr(env, dom, s, x); };
    auto want_int = [&](const Expr& x) {
        Value v = ev(x);
        if (v.kind != Value::Kind::Int) throw ConfigError("integer operand expected");
        return v.i;
    };
    auto want_bool = [&](const Expr& x) {
        Value v = ev(x);
        if (v.kind != Value::Kind::Bool) throw ConfigError("boolean operand expected");
        return v.b;
    };
    switch (n.kind) {
        case ExprKind::Var: {
            auto it = s.find(n.name);
            if (it != s.end()) return it->second;
            auto ct = dom.const_vals.find(n.name);
            if (ct != dom.const_vals.end()) return ct->second;
            throw ConfigError("unbound name " + n.name + " in valuation");
        }
        case ExprKind::IntLit: return Value::integer(n.int_val);
        case ExprKind::BoolLit: return Value::boolean(n.bool_val);
        case ExprKind::EnumLit: return Value::enum_v(n.type.name(), n.name);
        case ExprKind::EmptySeq: return Value::seq_v({});
        case ExprKind::App: {
            std::vector<Value> args;
            for (const auto& a : n.kids) args.push_back(ev(a));
            return dom.eval_fun(env, n.name, args);
        }
        case ExprKind::Unary:
            return Value::boolean(!want_bool(n.kids[0]));
        case ExprKind::Binary: {
            const Expr& a = n.kids[0];
            const Expr& b = n.kids[1];
            switch (n.bin) {
                case BinOp::And: return Value::boolean(want_bool(a) && want_bool(b));
                case BinOp::Or: return Value::boolean(want_bool(a) || want_bool(b));
                case BinOp::Implies: return Value::boolean(!want_bool(a) || want_bool(b));
                case BinOp::Eq: return Value::boolean(ev(a) == ev(b));
                case BinOp::Neq: return Value::boolean(!(ev(a) == ev(b)));
                case BinOp::Lt: return Value::boolean(want_int(a) < want_int(b));
                case BinOp::Le: return Value::boolean(want_int(a) <= want_int(b));
                case BinOp::Add: return Value::integer(want_int(a) + want_int(b));
                case BinOp::Sub: return Value::integer(want_int(a) - want_int(b));
                case BinOp::Mul: return Value::integer(want_int(a) * want_int(b));
            }
            break;
        }
        case ExprKind::Forall:
            throw ConfigError("quantifier not evaluable in simulation");
    }
    throw ConfigError("unevaluable expression " + e.str());
}

// -------------------------------------------------------------------------
// Alphabet and initial valuations
// -------------------------------------------------------------------------

std::vector<Event> alphabet(const TypeEnv& env, const DomainSpec& dom) {
    std::vector<Event> out;
    for (const auto& name : env.event_order) {
        const auto& payload = env.events.at(name);
        if (!payload) {
            out.push_back(Event{name, std::nullopt});
        } else {
            for (const auto& v : dom.carrier(*payload)) out.push_back(Event{name, v});
        }
    }
    return out;
}

std::vector<State> initial_valuations(const TypeEnv& env, const DomainSpec& dom) {
    State base;
    for (const auto& [name, v] : dom.const_vals) {
        if (env.consts.count(name)) base[name] = v;
    }
    std::vector<std::string> free_vars;
    for (const auto& name : env.var_order) {
        if (name == kActv) {
            base[name] = dom.carrier(env.vars.at(name)).front();
        } else {
            free_vars.push_back(name);
        }
    }
    std::vector<std::vector<Value>> carriers;
    for (const auto& name : free_vars) carriers.push_back(dom.carrier(env.vars.at(name)));

    std::vector<State> out;
    std::vector<std::size_t> idx(free_vars.size(), 0);
    while (true) {
        State s = base;
        for (std::size_t k = 0; k < free_vars.size(); ++k) s[free_vars[k]] = carriers[k][idx[k]];
        out.push_back(std::move(s));
        std::size_t k = free_vars.size();
        while (k > 0) {
            --k;
            if (++idx[k] < carriers[k].size()) break;
            idx[k] = 0;
            if (k == 0) return out;
        }
        if (free_vars.empty()) return out;
    }
}

// -------------------------------------------------------------------------
// Operational exploration
// -------------------------------------------------------------------------

namespace {

struct StableB {
    std::vector<std::pair<Event, Config>> offers;
    State state;  // variables as settled when the configuration stabilized
};

struct Behaviors {
    std::vector<State> terms;
    std::vector<StableB> stables;
    bool chaos = false;

    bool empty() const { return terms.empty() && stables.empty() && !chaos; }
};

constexpr int kExploreBudget = 2000000;

Behaviors explore(const TypeEnv& env, const DomainSpec& dom, const RProg& p, const State& s,
                  int& budget) {
    if (--budget <= 0) throw InternalError("exploration budget exhausted");
    Behaviors out;
    switch (p.kind()) {
        case RKind::Skip:
            out.terms.push_back(s);
            return out;
        case RKind::Stop:
            out.stables.push_back({{}, s});
            return out;
        case RKind::Miracle:
            return out;
        case RKind::Chaos:
            out.chaos = true;
            return out;
        case RKind::Assign: {
            State next = s;
            for (const auto& [x, rhs] : p.node().subst.entries)
                next[x] = eval_expr(env, dom, s, rhs);
            out.terms.push_back(std::move(next));
            return out;
        }
        case RKind::Assume:
            if (eval_expr(env, dom, s, p.node().cond).b) out.terms.push_back(s);
            return out;  // failed assumption behaves as Miracle
        case RKind::DoSimple: {
            StableB b;
            b.state = s;
            b.offers.push_back({Event{p.node().chan, std::nullopt}, Config{skipr(), s}});
            out.stables.push_back(std::move(b));
            return out;
        }
        case RKind::DoOut: {
            Value v = eval_expr(env, dom, s, p.node().cond);
            StableB b;
            b.state = s;
            b.offers.push_back({Event{p.node().chan, v}, Config{skipr(), s}});
            out.stables.push_back(std::move(b));
            return out;
        }
        case RKind::DoIn: {
            auto vt = env.vars.find(p.node().var);
            if (vt == env.vars.end()) throw ConfigError("input into unknown variable " + p.node().var);
            StableB b;
            b.state = s;
            for (const auto& v : dom.carrier(vt->second)) {
                State next = s;
                next[p.node().var] = v;
                b.offers.push_back({Event{p.node().chan, v}, Config{skipr(), std::move(next)}});
            }
            out.stables.push_back(std::move(b));
            return out;
        }
        case RKind::Guard:
            if (eval_expr(env, dom, s, p.node().cond).b)
                return explore(env, dom, p.node().kids[0], s, budget);
            out.stables.push_back({{}, s});  // blocked guard behaves as Stop
            return out;
        case RKind::Seq: {
            const RProg& a = p.node().kids[0];
            const RProg& b = p.node().kids[1];
            Behaviors ba = explore(env, dom, a, s, budget);
            out.chaos = ba.chaos;
            for (auto& sb : ba.stables) {
                StableB wrapped;
                wrapped.state = sb.state;
                for (auto& [e, cfg] : sb.offers) {
                    RProg rest = cfg.rest.kind() == RKind::Skip ? b : seqr(cfg.rest, b);
                    wrapped.offers.push_back({e, Config{rest, cfg.state}});
                }
                out.stables.push_back(std::move(wrapped));
            }
            for (const auto& mid : ba.terms) {
                Behaviors bb = explore(env, dom, b, mid, budget);
                out.chaos = out.chaos || bb.chaos;
                for (auto& t : bb.terms) out.terms.push_back(std::move(t));
                for (auto& sb : bb.stables) out.stables.push_back(std::move(sb));
            }
            return out;
        }
        case RKind::Cond:
            return eval_expr(env, dom, s, p.node().cond).b
                       ? explore(env, dom, p.node().kids[0], s, budget)
                       : explore(env, dom, p.node().kids[1], s, budget);
        case RKind::ExtChoice: {
            std::vector<Behaviors> parts;
            for (const auto& k : p.node().kids) {
                parts.push_back(explore(env, dom, k, s, budget));
                if (parts.back().empty()) return {};  // miraculous branch absorbs the choice
            }
            bool any_stable = false;
            std::vector<StableB> acc = {{{}, s}};
            for (auto& b : parts) {
                out.chaos = out.chaos || b.chaos;
                for (auto& t : b.terms) out.terms.push_back(std::move(t));
                if (b.stables.empty()) continue;
                any_stable = true;
                std::vector<StableB> next;
                for (const auto& bundle : acc) {
                    for (const auto& sb : b.stables) {
                        StableB merged = bundle;
                        if (merged.offers.empty()) merged.state = sb.state;
                        merged.offers.insert(merged.offers.end(), sb.offers.begin(),
                                             sb.offers.end());
                        next.push_back(std::move(merged));
                    }
                }
                acc = std::move(next);
            }
            if (any_stable)
                for (auto& bundle : acc) out.stables.push_back(std::move(bundle));
            return out;
        }
        case RKind::NDChoice: {
            for (const auto& k : p.node().kids) {
                Behaviors b = explore(env, dom, k, s, budget);
                out.chaos = out.chaos || b.chaos;
                for (auto& t : b.terms) out.terms.push_back(std::move(t));
                for (auto& sb : b.stables) out.stables.push_back(std::move(sb));
            }
            return out;
        }
        case RKind::Alternation: {
            bool any = false;
            for (const auto& br : p.node().branches) {
                if (!eval_expr(env, dom, s, br.guard).b) continue;
                any = true;
                Behaviors b = explore(env, dom, br.body, s, budget);
                out.chaos = out.chaos || b.chaos;
                for (auto& t : b.terms) out.terms.push_back(std::move(t));
                for (auto& sb : b.stables) out.stables.push_back(std::move(sb));
            }
            if (!any) out.chaos = true;  // empty alternation collapses to Chaos
            return out;
        }
        case RKind::DoIter: {
            bool any = false;
            for (const auto& br : p.node().branches) {
                if (!eval_expr(env, dom, s, br.guard).b) continue;
                any = true;
                Behaviors b = explore(env, dom, seqr(br.body, p), s, budget);
                out.chaos = out.chaos || b.chaos;
                for (auto& t : b.terms) out.terms.push_back(std::move(t));
                for (auto& sb : b.stables) out.stables.push_back(std::move(sb));
            }
            if (!any) out.terms.push_back(s);  // loop exit
            return out;
        }
    }
    throw InternalError("unhandled program kind in exploration");
}

std::string config_key(const Config& c) { return to_key(c.rest) + "|" + state_str(c.state); }

std::vector<Event> refusal_of(const std::vector<Event>& sigma, const StableB& sb) {
    std::set<Event> offered;
    for (const auto& [e, cfg] : sb.offers) offered.insert(e);
    std::vector<Event> out;
    for (const auto& e : sigma)
        if (!offered.count(e)) out.push_back(e);
    return out;
}

}  // namespace

const char* obs_status_name(ObsStatus s) {
    switch (s) {
        case ObsStatus::Quiescent: return "quiescent";
        case ObsStatus::Terminated: return "terminated";
        case ObsStatus::DivergentBound: return "depth-bound";
        case ObsStatus::ChaosSink: return "chaos";
    }
    return "?";
}

bool Observation::operator==(const Observation& o) const {
    return trace == o.trace && refusal == o.refusal && status == o.status &&
           final_state == o.final_state;
}

bool Observation::operator<(const Observation& o) const {
    if (trace != o.trace) return trace < o.trace;
    if (status != o.status) return status < o.status;
    if (refusal != o.refusal) return refusal < o.refusal;
    return final_state < o.final_state;
}

std::string Observation::str() const {
    std::string out = "(" + trace_str(trace) + ", refusing " + trace_str(refusal) + ", " +
                      obs_status_name(status);
    if (final_state) out += " " + state_str(*final_state);
    return out + ")";
}

std::vector<std::pair<Event, Config>> step(const TypeEnv& env, const DomainSpec& dom,
                                           const Config& cfg) {
    int budget = kExploreBudget;
    Behaviors b = explore(env, dom, cfg.rest, cfg.state, budget);
    std::vector<std::pair<Event, Config>> out;
    std::set<std::pair<Event, std::string>> seen;
    for (const auto& sb : b.stables) {
        for (const auto& offer : sb.offers) {
            if (seen.insert({offer.first, config_key(offer.second)}).second)
                out.push_back(offer);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (!(x.first == y.first)) return x.first < y.first;
        return config_key(x.second) < config_key(y.second);
    });
    return out;
}

std::set<Observation> failures_from(const TypeEnv& env, const DomainSpec& dom, const RProg& p,
                                    int depth, const State& s0) {
    std::vector<Event> sigma = alphabet(env, dom);
    std::set<Observation> obs;
    std::deque<std::pair<Config, std::vector<Event>>> queue;
    std::set<std::string> seen;
    queue.push_back({Config{p, s0}, {}});
    while (!queue.empty()) {
        auto [cfg, trace] = std::move(queue.front());
        queue.pop_front();
        int budget = kExploreBudget;
        Behaviors b = explore(env, dom, cfg.rest, cfg.state, budget);
        if (b.chaos) {
            Observation o;
            o.trace = trace;
            o.status = ObsStatus::ChaosSink;
            obs.insert(std::move(o));
        }
        for (const auto& fin : b.terms) {
            Observation o;
            o.trace = trace;
            o.refusal = sigma;
            o.status = ObsStatus::Terminated;
            o.final_state = fin;
            obs.insert(std::move(o));
        }
        for (const auto& sb : b.stables) {
            Observation o;
            o.trace = trace;
            o.refusal = refusal_of(sigma, sb);
            obs.insert(std::move(o));
            if ((int)trace.size() >= depth) {
                if (!sb.offers.empty()) {
                    Observation cut;
                    cut.trace = trace;
                    cut.status = ObsStatus::DivergentBound;
                    obs.insert(std::move(cut));
                }
                continue;
            }
            for (const auto& [e, next] : sb.offers) {
                auto t2 = trace;
                t2.push_back(e);
                std::string key = trace_str(t2) + "|" + config_key(next);
                if (seen.insert(std::move(key)).second) queue.push_back({next, std::move(t2)});
            }
        }
    }
    return obs;
}

std::set<Observation> failures(const TypeEnv& env, const DomainSpec& dom, const RProg& p,
                               int depth) {
    std::set<Observation> out;
    for (const auto& s0 : initial_valuations(env, dom)) {
        auto part = failures_from(env, dom, p, depth, s0);
        out.insert(part.begin(), part.end());
    }
    return out;
}

std::string EquivResult::describe() const {
    if (equal) return "equivalent";
    std::string out = "differ at initial " + state_str(initial);
    if (witness) {
        out += ": observation " + witness->str();
        out += side == 1 ? " only on left" : " only on right";
    }
    return out;
}

EquivResult equiv(const TypeEnv& env, const DomainSpec& dom, const RProg& lhs, const RProg& rhs,
                  int depth) {
    for (const auto& s0 : initial_valuations(env, dom)) {
        auto fa = failures_from(env, dom, lhs, depth, s0);
        auto fb = failures_from(env, dom, rhs, depth, s0);
        if (fa == fb) continue;
        EquivResult r;
        r.equal = false;
        r.initial = s0;
        std::vector<Observation> only_a, only_b;
        std::set_difference(fa.begin(), fa.end(), fb.begin(), fb.end(),
                            std::back_inserter(only_a));
        std::set_difference(fb.begin(), fb.end(), fa.begin(), fa.end(),
                            std::back_inserter(only_b));
        if (!only_a.empty() && (only_b.empty() || only_a.front() < only_b.front())) {
            r.witness = only_a.front();
            r.side = 1;
        } else if (!only_b.empty()) {
            r.witness = only_b.front();
            r.side = 2;
        }
        return r;
    }
    return {};
}

namespace {

// Action execution at the declaration level; inputs branch.
std::vector<State> exec_action(const TypeEnv& env, const DomainSpec& dom, const State& s,
                               const Action& a) {
    const ActionNode& n = a.node();
    switch (n.kind) {
        case ActKind::Skip: return {s};
        case ActKind::Assign: {
            State next = s;
            next[n.var] = eval_expr(env, dom, s, n.rhs);
            return {next};
        }
        case ActKind::Event: {
            if (n.event->kind != EventKind::Input) return {s};
            std::vector<State> out;
            for (const auto& v : dom.carrier(env.vars.at(n.event->var))) {
                State next = s;
                next[n.event->var] = v;
                out.push_back(std::move(next));
            }
            return out;
        }
        case ActKind::Seq: {
            std::vector<State> out;
            for (const auto& mid : exec_action(env, dom, s, n.kids[0])) {
                auto ends = exec_action(env, dom, mid, n.kids[1]);
                out.insert(out.end(), ends.begin(), ends.end());
            }
            return out;
        }
        case ActKind::If:
            return eval_expr(env, dom, s, n.cond).b ? exec_action(env, dom, s, n.kids[0])
                                                    : exec_action(env, dom, s, n.kids[1]);
    }
    throw InternalError("unhandled action kind");
}

}  // namespace

std::string InvariantViolation::describe() const {
    std::string out = "invariant fails on arrival at " + node + " with " + state_str(state);
    out += " (from " + state_str(initial);
    out += ", via";
    if (steps.empty()) out += " no transitions";
    for (const auto& t : steps) out += " " + t;
    return out + ")";
}

std::optional<InvariantViolation> check_invariant_bounded(const StMach& m, const DomainSpec& dom,
                                                          const Expr& inv, int max_steps) {
    MachineViews v = views(m);
    for (const auto& s0 : initial_valuations(m.env, dom)) {
        struct Item {
            std::string node;
            State state;
            std::vector<std::string> steps;
        };
        std::deque<Item> queue;
        std::set<std::string> seen;
        queue.push_back({m.init, s0, {}});
        seen.insert(m.init + "|" + state_str(s0));
        while (!queue.empty()) {
            Item it = std::move(queue.front());
            queue.pop_front();
            if (!eval_expr(m.env, dom, it.state, inv).b)
                return InvariantViolation{it.steps, it.node, it.state, s0};
            if ((int)it.steps.size() >= max_steps) continue;
            if (v.fnames.count(it.node)) continue;
            for (const auto& after_entry :
                 exec_action(m.env, dom, it.state, v.nmap.at(it.node).entry)) {
                for (const auto& t : v.tmap.at(it.node)) {
                    if (!eval_expr(m.env, dom, after_entry, t.cond).b) continue;
                    std::vector<State> bound = {after_entry};
                    if (t.trigger && t.trigger->kind == EventKind::Input) {
                        bound.clear();
                        for (const auto& pv : dom.carrier(m.env.vars.at(t.trigger->var))) {
                            State next = after_entry;
                            next[t.trigger->var] = pv;
                            bound.push_back(std::move(next));
                        }
                    }
                    for (const auto& b : bound) {
                        for (const auto& ex : exec_action(m.env, dom, b, v.nmap.at(it.node).exit)) {
                            for (const auto& fin : exec_action(m.env, dom, ex, t.act)) {
                                std::string key = t.tgt + "|" + state_str(fin);
                                if (!seen.insert(std::move(key)).second) continue;
                                auto steps = it.steps;
                                steps.push_back(t.id);
                                queue.push_back({t.tgt, fin, std::move(steps)});
                            }
                        }
                    }
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<DeadlockResult> find_deadlock(const CompiledMachine& m, const DomainSpec& dom,
                                            int depth) {
    std::optional<DeadlockResult> best;
    for (const auto& s0 : initial_valuations(m.env, dom)) {
        std::deque<std::pair<Config, std::vector<Event>>> queue;
        std::set<std::string> seen;
        queue.push_back({Config{m.program, s0}, {}});
        while (!queue.empty()) {
            auto [cfg, trace] = std::move(queue.front());
            queue.pop_front();
            if (best && (int)trace.size() >= (int)best->trace.size()) break;
            int budget = kExploreBudget;
            Behaviors b = explore(m.env, dom, cfg.rest, cfg.state, budget);
            const StableB* dead = nullptr;
            for (const auto& sb : b.stables)
                if (sb.offers.empty()) { dead = &sb; break; }
            if (dead) {
                best = DeadlockResult{trace, Config{cfg.rest, dead->state}, s0};
                break;
            }
            if ((int)trace.size() >= depth) continue;
            for (const auto& sb : b.stables) {
                for (const auto& [e, next] : sb.offers) {
                    auto t2 = trace;
                    t2.push_back(e);
                    std::string key = config_key(next);
                    if (seen.insert(std::move(key)).second) queue.push_back({next, std::move(t2)});
                }
            }
        }
    }
    return best;
}

}  // namespace rcv
