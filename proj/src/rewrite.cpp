#include "rcv/rewrite.hpp"

#include <algorithm>

namespace rcv {

const char* rule_name(RuleId id) {
    switch (id) {
        case RuleId::MIRACLE_LEFT_ANNIHIL: return "MIRACLE_LEFT_ANNIHIL";
        case RuleId::SKIP_UNIT_LEFT: return "SKIP_UNIT_LEFT";
        case RuleId::SKIP_UNIT_RIGHT: return "SKIP_UNIT_RIGHT";
        case RuleId::SEQ_ASSOC: return "SEQ_ASSOC";
        case RuleId::GUARD_TRUE: return "GUARD_TRUE";
        case RuleId::GUARD_FALSE: return "GUARD_FALSE";
        case RuleId::COND_TRUE: return "COND_TRUE";
        case RuleId::COND_FALSE: return "COND_FALSE";
        case RuleId::ALT_EMPTY: return "ALT_EMPTY";
        case RuleId::ALT_SINGLE: return "ALT_SINGLE";
        case RuleId::ALT_COVERED: return "ALT_COVERED";
        case RuleId::ASSIGN_COMPOSE: return "ASSIGN_COMPOSE";
        case RuleId::ASSIGN_PUSH_EVENT: return "ASSIGN_PUSH_EVENT";
        case RuleId::ASSIGN_PUSH_OUT: return "ASSIGN_PUSH_OUT";
        case RuleId::ASSIGN_PUSH_GUARD: return "ASSIGN_PUSH_GUARD";
        case RuleId::ASSIGN_PUSH_ASSUME: return "ASSIGN_PUSH_ASSUME";
        case RuleId::ASSIGN_PUSH_COND: return "ASSIGN_PUSH_COND";
        case RuleId::ASSIGN_PUSH_EXTCHOICE: return "ASSIGN_PUSH_EXTCHOICE";
        case RuleId::ASSIGN_PUSH_NDCHOICE: return "ASSIGN_PUSH_NDCHOICE";
        case RuleId::ASSIGN_PUSH_ALT: return "ASSIGN_PUSH_ALT";
        case RuleId::ASSIGN_PUSH_STOP: return "ASSIGN_PUSH_STOP";
        case RuleId::ASSIGN_PUSH_CHAOS: return "ASSIGN_PUSH_CHAOS";
        case RuleId::ASSIGN_PUSH_MIRACLE: return "ASSIGN_PUSH_MIRACLE";
        case RuleId::EXTCHOICE_LEFT_DIST: return "EXTCHOICE_LEFT_DIST";
        case RuleId::CONST_FOLD: return "CONST_FOLD";
    }
    return "?";
}

namespace {

bool is_do(RKind k) { return k == RKind::DoSimple || k == RKind::DoOut || k == RKind::DoIn; }

// A branch that performs an event (or never terminates) before anything else;
// sequencing distributes from the right over an external choice of such
// branches because none of them can resolve the choice by termination.
bool starts_with_comm(const RProg& p) {
    const RNode& n = p.node();
    switch (n.kind) {
        case RKind::DoSimple:
        case RKind::DoOut:
        case RKind::DoIn:
        case RKind::Stop:
        case RKind::Miracle:
            return true;
        case RKind::Guard:
            return starts_with_comm(n.kids[0]);
        case RKind::Seq:
            return starts_with_comm(n.kids[0]);
        default:
            return false;
    }
}

RProg with_tail(RProg p, const std::optional<RProg>& tail) {
    return tail ? seqr(std::move(p), *tail) : std::move(p);
}

struct Applied {
    RuleId rule;
    RProg result;
};

// The <s> ; Q family. head is Q, or Q's first sequence element with the rest
// in tail.
std::optional<Applied> apply_push(const RNode& assign, const RProg& head,
                                  const std::optional<RProg>& tail) {
    const Subst& s = assign.subst;
    RProg a = assignr(s);
    const RNode& h = head.node();
    switch (h.kind) {
        case RKind::Assign:
            return Applied{RuleId::ASSIGN_COMPOSE, with_tail(assignr(subst_compose(h.subst, s)), tail)};
        case RKind::DoSimple:
            return Applied{RuleId::ASSIGN_PUSH_EVENT, seqr(head, with_tail(a, tail))};
        case RKind::DoOut:
            return Applied{RuleId::ASSIGN_PUSH_OUT,
                           seqr(do_out(h.chan, subst_apply(s, h.cond)), with_tail(a, tail))};
        case RKind::Guard:
            return Applied{RuleId::ASSIGN_PUSH_GUARD,
                           with_tail(guardr(subst_apply(s, h.cond), seqr(a, h.kids[0])), tail)};
        case RKind::Assume:
            return Applied{RuleId::ASSIGN_PUSH_ASSUME,
                           seqr(assumer(subst_apply(s, h.cond)), with_tail(a, tail))};
        case RKind::Cond:
            return Applied{RuleId::ASSIGN_PUSH_COND,
                           with_tail(condr(seqr(a, h.kids[0]), subst_apply(s, h.cond),
                                           seqr(a, h.kids[1])),
                                     tail)};
        case RKind::ExtChoice:
        case RKind::NDChoice: {
            std::vector<RProg> kids;
            kids.reserve(h.kids.size());
            for (const RProg& k : h.kids) kids.push_back(seqr(a, k));
            RProg c = h.kind == RKind::ExtChoice ? ext_choice(std::move(kids))
                                                 : nd_choice(std::move(kids));
            return Applied{h.kind == RKind::ExtChoice ? RuleId::ASSIGN_PUSH_EXTCHOICE
                                                      : RuleId::ASSIGN_PUSH_NDCHOICE,
                           with_tail(std::move(c), tail)};
        }
        case RKind::Alternation: {
            std::vector<Branch> bs;
            bs.reserve(h.branches.size());
            for (const Branch& b : h.branches)
                bs.push_back({subst_apply(s, b.guard), seqr(a, b.body)});
            return Applied{RuleId::ASSIGN_PUSH_ALT, with_tail(alternation_node(std::move(bs)), tail)};
        }
        case RKind::Stop:
            return Applied{RuleId::ASSIGN_PUSH_STOP, with_tail(stopr(), tail)};
        case RKind::Chaos:
            return Applied{RuleId::ASSIGN_PUSH_CHAOS, with_tail(chaos(), tail)};
        case RKind::Miracle:
            return Applied{RuleId::ASSIGN_PUSH_MIRACLE, with_tail(miracle(), tail)};
        case RKind::Skip:
        case RKind::DoIn:
        case RKind::DoIter:
        case RKind::Seq:
            // Skip simplifies on its own; inputs and iterations keep the
            // pending update in front of them.
            return std::nullopt;
    }
    return std::nullopt;
}

std::optional<Applied> fold_node(const RNode& n) {
    auto fold_changed = [](const Expr& e, Expr& out) {
        out = constant_fold(e);
        return out != e;
    };
    Expr f;
    switch (n.kind) {
        case RKind::Guard:
            if (fold_changed(n.cond, f)) return Applied{RuleId::CONST_FOLD, guardr(f, n.kids[0])};
            break;
        case RKind::Cond:
            if (fold_changed(n.cond, f))
                return Applied{RuleId::CONST_FOLD, condr(n.kids[0], f, n.kids[1])};
            break;
        case RKind::Assume:
            if (fold_changed(n.cond, f)) return Applied{RuleId::CONST_FOLD, assumer(f)};
            break;
        case RKind::DoOut:
            if (fold_changed(n.cond, f)) return Applied{RuleId::CONST_FOLD, do_out(n.chan, f)};
            break;
        case RKind::Assign: {
            Subst s;
            bool changed = false;
            for (const auto& [k, v] : n.subst.entries) {
                Expr fv = constant_fold(v);
                changed = changed || fv != v;
                s.entries.emplace(k, std::move(fv));
            }
            if (changed) return Applied{RuleId::CONST_FOLD, assignr(std::move(s))};
            break;
        }
        case RKind::Alternation: {
            std::vector<Branch> bs;
            bool changed = false;
            for (const Branch& b : n.branches) {
                Expr fg = constant_fold(b.guard);
                changed = changed || fg != b.guard;
                bs.push_back({std::move(fg), b.body});
            }
            if (changed) return Applied{RuleId::CONST_FOLD, alternation_node(std::move(bs))};
            break;
        }
        default:
            break;
    }
    return std::nullopt;
}

std::optional<Applied> apply_at(const RProg& p) {
    const RNode& n = p.node();
    switch (n.kind) {
        case RKind::Seq: {
            const RProg& a = n.kids[0];
            const RProg& b = n.kids[1];
            if (a.kind() == RKind::Miracle) return Applied{RuleId::MIRACLE_LEFT_ANNIHIL, miracle()};
            if (a.kind() == RKind::Skip) return Applied{RuleId::SKIP_UNIT_LEFT, b};
            if (b.kind() == RKind::Skip) return Applied{RuleId::SKIP_UNIT_RIGHT, a};
            if (a.kind() == RKind::Seq)
                return Applied{RuleId::SEQ_ASSOC,
                               seqr(a.node().kids[0], seqr(a.node().kids[1], b))};
            if (a.kind() == RKind::Assign) {
                if (b.kind() == RKind::Seq)
                    return apply_push(a.node(), b.node().kids[0], b.node().kids[1]);
                return apply_push(a.node(), b, std::nullopt);
            }
            if (a.kind() == RKind::Assume) {
                const RProg& head = b.kind() == RKind::Seq ? b.node().kids[0] : b;
                std::optional<RProg> tail;
                if (b.kind() == RKind::Seq) tail = b.node().kids[1];
                if (head.kind() == RKind::Alternation) {
                    std::vector<Expr> gs;
                    for (const Branch& br : head.node().branches) gs.push_back(br.guard);
                    if (constant_fold(a.node().cond) == constant_fold(or_of(gs))) {
                        std::vector<RProg> cmds;
                        for (const Branch& br : head.node().branches)
                            cmds.push_back(gcmd(br.guard, br.body));
                        return Applied{RuleId::ALT_COVERED,
                                       with_tail(nd_choice(std::move(cmds)), tail)};
                    }
                }
            }
            if (a.kind() == RKind::ExtChoice) {
                const auto& kids = a.node().kids;
                if (!kids.empty() && std::all_of(kids.begin(), kids.end(), starts_with_comm)) {
                    std::vector<RProg> out;
                    out.reserve(kids.size());
                    for (const RProg& k : kids) out.push_back(seqr(k, b));
                    return Applied{RuleId::EXTCHOICE_LEFT_DIST, ext_choice(std::move(out))};
                }
            }
            break;
        }
        case RKind::Guard:
            if (is_true(n.cond)) return Applied{RuleId::GUARD_TRUE, n.kids[0]};
            if (is_false(n.cond)) return Applied{RuleId::GUARD_FALSE, stopr()};
            break;
        case RKind::Cond:
            if (is_true(n.cond)) return Applied{RuleId::COND_TRUE, n.kids[0]};
            if (is_false(n.cond)) return Applied{RuleId::COND_FALSE, n.kids[1]};
            break;
        case RKind::Alternation:
            if (n.branches.empty()) return Applied{RuleId::ALT_EMPTY, chaos()};
            if (n.branches.size() == 1)
                return Applied{RuleId::ALT_SINGLE,
                               condr(n.branches[0].body, n.branches[0].guard, chaos())};
            break;
        default:
            break;
    }
    return fold_node(n);
}

// Child access uniform over kids and branch bodies.
int child_count(const RNode& n) {
    return static_cast<int>(n.kids.size() + n.branches.size());
}

const RProg& child_at(const RNode& n, int i) {
    if (i < static_cast<int>(n.kids.size())) return n.kids[i];
    return n.branches[i - n.kids.size()].body;
}

RProg replace_child(const RProg& p, int i, RProg sub) {
    const RNode& n = p.node();
    RNode out = n;
    if (i < static_cast<int>(n.kids.size())) {
        out.kids[i] = std::move(sub);
    } else {
        out.branches[i - n.kids.size()].body = std::move(sub);
    }
    return RProg::wrap(std::make_shared<const RNode>(std::move(out)));
}

struct Found {
    RuleId rule;
    RProg result;
    std::vector<int> path;
};

std::optional<Found> find_redex(const RProg& p) {
    if (auto a = apply_at(p)) return Found{a->rule, a->result, {}};
    if (p.kind() == RKind::DoIter) return std::nullopt;  // node-local normalization only
    const RNode& n = p.node();
    for (int i = 0; i < child_count(n); ++i) {
        if (auto f = find_redex(child_at(n, i))) {
            f->path.insert(f->path.begin(), i);
            return Found{f->rule, replace_child(p, i, std::move(f->result)), std::move(f->path)};
        }
    }
    return std::nullopt;
}

}  // namespace

RewriteResult simplify(const RProg& p) {
    RewriteResult r{p, {}};
    constexpr int kBudget = 10000;
    for (int step = 0; step < kBudget; ++step) {
        auto f = find_redex(r.program);
        if (!f) return r;
        r.program = f->result;
        r.trace.push_back({f->rule, std::move(f->path)});
    }
    throw InternalError("rewrite budget exhausted; rule set failed to terminate");
}

// -------------------------------------------------------------------------
// Whole-program substitution push
// -------------------------------------------------------------------------

RProg apply_subst(const Subst& s, const RProg& p) {
    if (s.is_identity()) return p;
    const RNode& n = p.node();
    switch (n.kind) {
        case RKind::Skip: return assignr(s);
        case RKind::Assign: return assignr(subst_compose(n.subst, s));
        case RKind::Stop:
        case RKind::Chaos:
        case RKind::Miracle:
            return p;
        case RKind::DoSimple: return seqr(p, assignr(s));
        case RKind::DoOut:
            return seqr(do_out(n.chan, constant_fold(subst_apply(s, n.cond))), assignr(s));
        case RKind::DoIn:
        case RKind::DoIter:
            return seqr(assignr(s), p);
        case RKind::Guard:
            return guardr(constant_fold(subst_apply(s, n.cond)), apply_subst(s, n.kids[0]));
        case RKind::Assume:
            return seqr(assumer(constant_fold(subst_apply(s, n.cond))), assignr(s));
        case RKind::Cond:
            return condr(apply_subst(s, n.kids[0]), constant_fold(subst_apply(s, n.cond)),
                         apply_subst(s, n.kids[1]));
        case RKind::Seq:
            return seqr(apply_subst(s, n.kids[0]), n.kids[1]);
        case RKind::ExtChoice:
        case RKind::NDChoice: {
            std::vector<RProg> kids;
            kids.reserve(n.kids.size());
            for (const RProg& k : n.kids) kids.push_back(apply_subst(s, k));
            return n.kind == RKind::ExtChoice ? ext_choice(std::move(kids))
                                              : nd_choice(std::move(kids));
        }
        case RKind::Alternation: {
            std::vector<Branch> bs;
            bs.reserve(n.branches.size());
            for (const Branch& b : n.branches)
                bs.push_back({constant_fold(subst_apply(s, b.guard)), apply_subst(s, b.body)});
            return alternation_node(std::move(bs));
        }
    }
    return p;
}

// -------------------------------------------------------------------------
// Node normal form
// -------------------------------------------------------------------------

namespace {

// A sequence whose head is an event is the transition part exactly when what
// follows is transition material rather than another choice; an event
// followed by guards or a choice is still part of the entry.
bool is_choice_shape(const RProg& p) {
    const RNode& n = p.node();
    switch (n.kind) {
        case RKind::Stop:
        case RKind::ExtChoice:
        case RKind::Guard:
            return true;
        case RKind::DoSimple:
        case RKind::DoOut:
        case RKind::DoIn:
            return true;
        case RKind::Seq:
            if (is_do(n.kids[0].kind())) return !is_choice_shape(n.kids[1]);
            return false;
        default:
            return false;
    }
}

void seq_elems(const RProg& p, std::vector<RProg>& out) {
    if (p.kind() == RKind::Seq) {
        seq_elems(p.node().kids[0], out);
        seq_elems(p.node().kids[1], out);
    } else if (p.kind() != RKind::Skip) {
        out.push_back(p);
    }
}

RProg seq_rebuild(const std::vector<RProg>& elems, std::size_t from) {
    if (from >= elems.size()) return skipr();
    RProg out = elems.back();
    for (std::size_t k = elems.size() - 1; k > from; --k) out = seqr(elems[k - 1], out);
    return out;
}

void check_post(const RProg& p) {
    const RNode& n = p.node();
    switch (n.kind) {
        case RKind::Skip:
        case RKind::Assign:
        case RKind::DoSimple:
        case RKind::DoOut:
        case RKind::DoIn:
            return;
        case RKind::Seq:
        case RKind::Cond:
            for (const RProg& k : n.kids) check_post(k);
            return;
        default:
            throw NormalizeError("transition remainder contains control structure (" +
                                 to_text(p) + "); node body is not in compiled shape");
    }
}

struct EntryWalker {
    NodeNormalForm* nf;
    std::optional<RProg> choice_term;
    int fresh = 0;

    void walk(Expr cond, Subst upd, const RProg& rest) {
        const RNode& n = rest.node();
        if (n.kind == RKind::Seq && n.kids[0].kind() == RKind::Seq) {
            // Reassociate to the right so the spine walks one element at a
            // time; transitions with both a trigger and an action nest left.
            const RNode& h = n.kids[0].node();
            walk(std::move(cond), std::move(upd),
                 seqr(h.kids[0], seqr(h.kids[1], n.kids[1])));
            return;
        }
        if (is_choice_shape(rest)) {
            finish(std::move(cond), std::move(upd), rest);
            return;
        }
        if (n.kind == RKind::Seq) {
            const RProg& h = n.kids[0];
            const RProg& t = n.kids[1];
            const RNode& hn = h.node();
            switch (hn.kind) {
                case RKind::Skip:
                    walk(std::move(cond), std::move(upd), t);
                    return;
                case RKind::Assign:
                    walk(std::move(cond), subst_compose(hn.subst, upd), t);
                    return;
                case RKind::Cond: {
                    Expr b = subst_apply(upd, hn.cond);
                    walk(constant_fold(cond && b), upd, glue(hn.kids[0], t));
                    walk(constant_fold(cond && !b), upd, glue(hn.kids[1], t));
                    return;
                }
                case RKind::DoSimple:
                case RKind::DoOut:
                    // Entry event before the choice: no state effect.
                    walk(std::move(cond), std::move(upd), t);
                    return;
                case RKind::DoIn: {
                    // Input in the entry havocs its target: the pre-input
                    // value survives under a fresh name, the target becomes
                    // unconstrained.
                    std::string old = hn.var;
                    std::string ghost = old + "!pre" + std::to_string(fresh++);
                    Subst rename;
                    rename.entries.emplace(old, Expr::var(ghost));
                    Subst upd2;
                    for (const auto& [k, v] : upd.entries) {
                        if (k == old) continue;
                        upd2.entries.emplace(k, subst_apply(rename, v));
                    }
                    nf->havocs.emplace(ghost, old);
                    walk(subst_apply(rename, cond), std::move(upd2), t);
                    return;
                }
                default:
                    throw NormalizeError("unsupported entry element: " + to_text(h));
            }
        }
        throw NormalizeError("node body is not in compiled shape: " + to_text(rest));
    }

    static RProg glue(const RProg& a, const RProg& b) {
        if (a.kind() == RKind::Skip) return b;
        return seqr(a, b);
    }

    void finish(Expr cond, Subst upd, const RProg& term) {
        if (is_false(constant_fold(cond))) return;  // unreachable entry path
        if (choice_term) {
            if (*choice_term != term)
                throw NormalizeError("entry paths reach different transition parts");
        } else {
            choice_term = term;
        }
        nf->paths.push_back({constant_fold(std::move(cond)), std::move(upd)});
    }
};

NormAlt split_single(const RProg& alt) {
    NormAlt out{Expr::bool_lit(true), std::nullopt, skipr()};
    RProg k = alt;
    if (k.kind() == RKind::Guard) {
        out.guard = k.node().cond;
        k = k.node().kids[0];
    }
    std::vector<RProg> elems;
    seq_elems(k, elems);
    std::size_t from = 0;
    if (!elems.empty() && is_do(elems[0].kind())) {
        out.trigger = elems[0];
        from = 1;
    }
    out.post = seq_rebuild(elems, from);
    check_post(out.post);
    return out;
}

}  // namespace

Expr NodeNormalForm::guard_under(const NormPath& p, std::size_t alt) const {
    return constant_fold(subst_apply(p.update, alts[alt].guard));
}

Expr NodeNormalForm::coverage(const NormPath& p) const {
    std::vector<Expr> gs;
    gs.reserve(alts.size());
    for (const NormAlt& a : alts) gs.push_back(a.guard);
    return constant_fold(implies(p.cond, subst_apply(p.update, or_of(gs))));
}

NodeNormalForm normalize_node(const RProg& body) {
    NodeNormalForm nf;
    EntryWalker w{&nf, std::nullopt, 0};
    w.walk(Expr::bool_lit(true), Subst{}, unqualify(body));
    if (nf.paths.empty()) throw NormalizeError("no reachable entry path");
    const RProg& term = *w.choice_term;
    if (term.kind() == RKind::Stop) return nf;
    if (term.kind() == RKind::ExtChoice) {
        for (const RProg& k : term.node().kids) nf.alts.push_back(split_single(k));
    } else {
        nf.alts.push_back(split_single(term));
    }
    return nf;
}

}  // namespace rcv
