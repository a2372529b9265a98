#include "rcv/semantics.hpp"

namespace rcv {

namespace {

RProg event_sem(const EventRef& e) {
    switch (e.kind) {
        case EventKind::Simple: return do_simple(e.chan);
        case EventKind::Input: return do_in(e.chan, e.var);
        case EventKind::Output: return do_out(e.chan, e.value);
    }
    return skipr();
}

// Sequence with Skip elision, keeping compiled terms in the shape the worked
// examples use.
RProg seq_nonskip(std::vector<RProg> parts) {
    std::vector<RProg> kept;
    for (RProg& p : parts)
        if (p.kind() != RKind::Skip) kept.push_back(std::move(p));
    if (kept.empty()) return skipr();
    RProg acc = kept.back();
    for (std::size_t i = kept.size() - 1; i-- > 0;) acc = seqr(kept[i], acc);
    return acc;
}

}  // namespace

RProg act_sem(const Action& a) {
    const ActionNode& n = a.node();
    switch (n.kind) {
        case ActKind::Skip: return skipr();
        case ActKind::Assign: {
            Subst s;
            s.entries.emplace(n.var, n.rhs);
            return assignr(std::move(s));
        }
        case ActKind::Event: return event_sem(*n.event);
        case ActKind::Seq: return seq_nonskip({act_sem(n.kids[0]), act_sem(n.kids[1])});
        case ActKind::If: return condr(act_sem(n.kids[0]), n.cond, act_sem(n.kids[1]));
    }
    return skipr();
}

RProg trans_sem(const TypeEnv& env, const Type& actv_type, const Action& src_exit,
                const TransDecl& t) {
    RProg trigger = t.trigger ? event_sem(*t.trigger) : do_simple(kEps);
    RProg inner = seq_nonskip({std::move(trigger), act_sem(src_exit), act_sem(t.act)});
    inner = frame_extend(inner, env);

    Subst upd;
    upd.entries.emplace(kActv, Expr::enum_lit(actv_type, t.tgt));
    RProg body = seq_nonskip({std::move(inner), assignr(std::move(upd))});

    if (is_true(t.cond)) return body;
    return guardr(frame_extend_expr(t.cond, env), std::move(body));
}

RProg node_sem(const TypeEnv& env, const Type& actv_type, const MachineViews& v,
               const NodeDecl& n) {
    const std::vector<TransDecl>& outs = v.tmap.at(n.name);
    std::vector<RProg> alts;
    alts.reserve(outs.size());
    for (const TransDecl& t : outs) alts.push_back(trans_sem(env, actv_type, n.exit, t));

    RProg choice;
    if (alts.empty()) {
        choice = stopr();
    } else if (alts.size() == 1) {
        choice = std::move(alts.front());
    } else {
        choice = ext_choice(std::move(alts));
    }
    return seq_nonskip({frame_extend(act_sem(n.entry), env), std::move(choice)});
}

CompiledMachine machine_sem(const StMach& m) {
    type_check_machine(m);

    CompiledMachine c;
    c.name = m.name;
    c.base_env = m.env;
    c.mviews = views(m);

    std::vector<std::string> node_names;
    node_names.reserve(m.nodes.size());
    for (const NodeDecl& n : m.nodes) node_names.push_back(n.name);
    c.actv_type = Type::enumeration(m.name + "$nodes", node_names);

    c.env = m.env;
    c.env.vars.clear();
    c.env.var_order.clear();
    for (const std::string& v : m.env.var_order)
        c.env.declare_var(kFramePrefix + v, m.env.vars.at(v));
    c.env.declare_var(kActv, c.actv_type);
    c.env.declare_event(kEps, std::nullopt);

    std::vector<Branch> branches;
    branches.reserve(c.mviews.inters.size());
    for (const NodeDecl& n : c.mviews.inters) {
        RProg body = node_sem(m.env, c.actv_type, c.mviews, n);
        c.per_node.emplace(n.name, body);
        Expr g = eq(Expr::var(kActv), Expr::enum_lit(c.actv_type, n.name));
        branches.push_back({std::move(g), std::move(body)});
    }

    Subst init;
    init.entries.emplace(kActv, Expr::enum_lit(c.actv_type, m.init));
    c.program = seqr(assignr(std::move(init)), do_iter(std::move(branches)));
    return c;
}

}  // namespace rcv
