#include "rcv/machine.hpp"

#include <sstream>

namespace rcv {

// -------------------------------------------------------------------------
// EventRef
// -------------------------------------------------------------------------

EventRef EventRef::simple(std::string chan) {
    EventRef e;
    e.kind = EventKind::Simple;
    e.chan = std::move(chan);
    return e;
}

EventRef EventRef::input(std::string chan, std::string var) {
    EventRef e;
    e.kind = EventKind::Input;
    e.chan = std::move(chan);
    e.var = std::move(var);
    return e;
}

EventRef EventRef::output(std::string chan, Expr value) {
    EventRef e;
    e.kind = EventKind::Output;
    e.chan = std::move(chan);
    e.value = std::move(value);
    return e;
}

bool EventRef::operator==(const EventRef& o) const {
    if (kind != o.kind || chan != o.chan) return false;
    switch (kind) {
        case EventKind::Simple: return true;
        case EventKind::Input: return var == o.var;
        case EventKind::Output: return value == o.value;
    }
    return false;
}

std::string EventRef::str() const {
    switch (kind) {
        case EventKind::Simple: return chan;
        case EventKind::Input: return chan + "?" + var;
        case EventKind::Output: {
            // Parenthesize anything that is not a plain atom so the result
            // reparses unambiguously.
            ExprKind k = value.kind();
            bool atom = k == ExprKind::Var || k == ExprKind::IntLit || k == ExprKind::BoolLit ||
                        k == ExprKind::EnumLit || k == ExprKind::EmptySeq || k == ExprKind::App;
            return chan + "!" + (atom ? value.str() : "(" + value.str() + ")");
        }
    }
    return chan;
}

// -------------------------------------------------------------------------
// Action
// -------------------------------------------------------------------------

Action Action::mk(ActionNode n) { return Action(std::make_shared<const ActionNode>(std::move(n))); }

Action::Action() : node_(skip().node_) {}

Action Action::skip() {
    static const auto n = std::make_shared<const ActionNode>();
    return Action(n);
}

Action Action::assign(std::string var, Expr rhs) {
    ActionNode n;
    n.kind = ActKind::Assign;
    n.var = std::move(var);
    n.rhs = std::move(rhs);
    return mk(std::move(n));
}

Action Action::event(EventRef e) {
    ActionNode n;
    n.kind = ActKind::Event;
    n.event = std::move(e);
    return mk(std::move(n));
}

Action Action::seq(Action a, Action b) {
    ActionNode n;
    n.kind = ActKind::Seq;
    n.kids = {std::move(a), std::move(b)};
    return mk(std::move(n));
}

Action Action::cond(Expr b, Action then_branch, Action else_branch) {
    ActionNode n;
    n.kind = ActKind::If;
    n.cond = std::move(b);
    n.kids = {std::move(then_branch), std::move(else_branch)};
    return mk(std::move(n));
}

bool Action::operator==(const Action& o) const {
    if (node_ == o.node_) return true;
    const ActionNode& a = *node_;
    const ActionNode& b = *o.node_;
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ActKind::Skip: return true;
        case ActKind::Assign: return a.var == b.var && a.rhs == b.rhs;
        case ActKind::Event: return *a.event == *b.event;
        case ActKind::Seq: return a.kids == b.kids;
        case ActKind::If: return a.cond == b.cond && a.kids == b.kids;
    }
    return false;
}

std::string Action::str() const {
    const ActionNode& n = *node_;
    switch (n.kind) {
        case ActKind::Skip: return "skip";
        case ActKind::Assign: return n.var + " := " + n.rhs.str();
        case ActKind::Event: return n.event->str();
        case ActKind::Seq: return n.kids[0].str() + " ; " + n.kids[1].str();
        case ActKind::If:
            return "if " + n.cond.str() + " then " + n.kids[0].str() + " else " + n.kids[1].str() +
                   " end";
    }
    return "skip";
}

// -------------------------------------------------------------------------
// Declarations
// -------------------------------------------------------------------------

bool NodeDecl::operator==(const NodeDecl& o) const {
    return name == o.name && entry == o.entry && exit == o.exit;
}

bool TransDecl::operator==(const TransDecl& o) const {
    return id == o.id && src == o.src && tgt == o.tgt && trigger == o.trigger && cond == o.cond &&
           act == o.act;
}

bool StMach::operator==(const StMach& o) const {
    return name == o.name && env == o.env && nodes == o.nodes && init == o.init &&
           finals == o.finals && transitions == o.transitions;
}

// -------------------------------------------------------------------------
// Pretty printer
// -------------------------------------------------------------------------

std::string pretty_print(const StMach& m) {
    std::ostringstream os;
    for (const auto& [name, t] : m.env.named_types) {
        if (t.kind() == TypeKind::Enum) {
            os << "enum " << name << " = ";
            const auto& cs = t.constructors();
            for (std::size_t i = 0; i < cs.size(); ++i) {
                if (i) os << " | ";
                os << cs[i];
            }
            os << "\n";
        } else {
            os << "abstract " << name << "\n";
        }
    }
    for (const auto& [name, sig] : m.env.funs) {
        os << "fun " << name << " : (";
        for (std::size_t i = 0; i < sig.params.size(); ++i) {
            if (i) os << ", ";
            os << sig.params[i].str();
        }
        os << ") -> " << sig.result.str() << "\n";
    }
    if (!m.env.const_order.empty()) {
        os << "consts\n";
        for (const std::string& c : m.env.const_order) {
            os << "  " << c << " : " << m.env.consts.at(c).str();
            if (auto it = m.env.const_inits.find(c); it != m.env.const_inits.end())
                os << " = " << it->second.str();
            os << "\n";
        }
    }
    os << "statemachine " << m.name << "\n";
    if (!m.env.var_order.empty()) {
        os << "  vars\n";
        for (const std::string& v : m.env.var_order)
            os << "    " << v << " : " << m.env.vars.at(v).str() << "\n";
    }
    if (!m.env.event_order.empty()) {
        os << "  events\n";
        for (const std::string& e : m.env.event_order) {
            os << "    " << e;
            if (const auto& p = m.env.events.at(e)) os << " : " << p->str();
            os << "\n";
        }
    }
    if (!m.nodes.empty()) {
        os << "  states\n";
        for (const NodeDecl& nd : m.nodes) {
            os << "    " << nd.name;
            if (!nd.entry.is_skip()) os << " entry " << nd.entry.str();
            if (!nd.exit.is_skip()) os << " exit " << nd.exit.str();
            os << "\n";
        }
    }
    os << "  initial " << m.init << "\n";
    if (!m.finals.empty()) {
        os << "  finals";
        for (const std::string& f : m.finals) os << " " << f;
        os << "\n";
    }
    if (!m.transitions.empty()) {
        os << "  transitions\n";
        for (const TransDecl& t : m.transitions) {
            os << "    " << t.id << " from " << t.src << " to " << t.tgt;
            if (t.trigger) os << " trigger " << t.trigger->str();
            if (!is_true(t.cond)) os << " condition " << t.cond.str();
            if (!t.act.is_skip()) os << " action " << t.act.str();
            os << "\n";
        }
    }
    return os.str();
}

// -------------------------------------------------------------------------
// Machine-level type checking
// -------------------------------------------------------------------------

namespace {

void check_event_ref(const TypeEnv& env, const EventRef& e, const std::string& where) {
    auto it = env.events.find(e.chan);
    if (it == env.events.end())
        throw TypeError("unknown event '" + e.chan + "' in " + where);
    const std::optional<Type>& payload = it->second;
    switch (e.kind) {
        case EventKind::Simple:
            if (payload)
                throw TypeError("event '" + e.chan + "' carries a payload; use ? or ! in " + where);
            break;
        case EventKind::Input: {
            if (!payload)
                throw TypeError("event '" + e.chan + "' carries no payload in " + where);
            auto vt = env.vars.find(e.var);
            if (vt == env.vars.end())
                throw TypeError("input target '" + e.var + "' is not a state variable in " + where);
            if (vt->second != *payload)
                throw TypeError("input target '" + e.var + "' has type " + vt->second.str() +
                                ", event payload is " + payload->str() + " in " + where);
            break;
        }
        case EventKind::Output:
            if (!payload)
                throw TypeError("event '" + e.chan + "' carries no payload in " + where);
            type_check(env, e.value, *payload);
            break;
    }
}

void check_action(const TypeEnv& env, const Action& a, const std::string& where) {
    const ActionNode& n = a.node();
    switch (n.kind) {
        case ActKind::Skip: return;
        case ActKind::Assign: {
            auto vt = env.vars.find(n.var);
            if (vt == env.vars.end()) {
                if (env.consts.count(n.var))
                    throw TypeError("cannot assign to constant '" + n.var + "' in " + where);
                throw TypeError("assignment to undeclared variable '" + n.var + "' in " + where);
            }
            type_check(env, n.rhs, vt->second);
            return;
        }
        case ActKind::Event: check_event_ref(env, *n.event, where); return;
        case ActKind::Seq:
            check_action(env, n.kids[0], where);
            check_action(env, n.kids[1], where);
            return;
        case ActKind::If:
            type_check(env, n.cond, Type::boolean());
            check_action(env, n.kids[0], where);
            check_action(env, n.kids[1], where);
            return;
    }
}

}  // namespace

void type_check_machine(const StMach& m) {
    if (m.name.empty()) throw TypeError("state machine has no name");
    for (const NodeDecl& nd : m.nodes) {
        check_action(m.env, nd.entry, "entry of state " + nd.name);
        check_action(m.env, nd.exit, "exit of state " + nd.name);
    }
    for (const TransDecl& t : m.transitions) {
        if (t.trigger) check_event_ref(m.env, *t.trigger, "trigger of " + t.id);
        type_check(m.env, t.cond, Type::boolean());
        check_action(m.env, t.act, "action of " + t.id);
    }
}

}  // namespace rcv
