#include "rcv/rprog.hpp"

#include <sstream>
#include <stdexcept>

namespace rcv {

const char* const kFramePrefix = "r:";
const char* const kActv = "actv";
const char* const kEps = "eps";

RKind RProg::kind() const { return node_->kind; }

namespace {
RProg mk(RNode n) { return RProg::wrap(std::make_shared<const RNode>(std::move(n))); }
}  // namespace

RProg miracle() {
    static const RProg p = mk([]{ RNode n; n.kind = RKind::Miracle; return n; }());
    return p;
}
RProg chaos() {
    static const RProg p = mk([]{ RNode n; n.kind = RKind::Chaos; return n; }());
    return p;
}
RProg skipr() {
    static const RProg p = mk([]{ RNode n; n.kind = RKind::Skip; return n; }());
    return p;
}
RProg stopr() {
    static const RProg p = mk([]{ RNode n; n.kind = RKind::Stop; return n; }());
    return p;
}

RProg assignr(Subst s) {
    RNode n;
    n.kind = RKind::Assign;
    n.subst = std::move(s);
    return mk(std::move(n));
}

RProg do_simple(std::string chan) {
    RNode n;
    n.kind = RKind::DoSimple;
    n.chan = std::move(chan);
    return mk(std::move(n));
}

RProg do_out(std::string chan, Expr value) {
    RNode n;
    n.kind = RKind::DoOut;
    n.chan = std::move(chan);
    n.cond = std::move(value);
    return mk(std::move(n));
}

RProg do_in(std::string chan, std::string var) {
    RNode n;
    n.kind = RKind::DoIn;
    n.chan = std::move(chan);
    n.var = std::move(var);
    return mk(std::move(n));
}

RProg guardr(Expr b, RProg p) {
    RNode n;
    n.kind = RKind::Guard;
    n.cond = std::move(b);
    n.kids = {std::move(p)};
    return mk(std::move(n));
}

RProg seqr(RProg p, RProg q) {
    RNode n;
    n.kind = RKind::Seq;
    n.kids = {std::move(p), std::move(q)};
    return mk(std::move(n));
}

RProg condr(RProg p, Expr b, RProg q) {
    RNode n;
    n.kind = RKind::Cond;
    n.cond = std::move(b);
    n.kids = {std::move(p), std::move(q)};
    return mk(std::move(n));
}

RProg ext_choice(std::vector<RProg> ps) {
    RNode n;
    n.kind = RKind::ExtChoice;
    n.kids = std::move(ps);
    return mk(std::move(n));
}

RProg nd_choice(std::vector<RProg> ps) {
    RNode n;
    n.kind = RKind::NDChoice;
    n.kids = std::move(ps);
    return mk(std::move(n));
}

RProg assumer(Expr b) {
    RNode n;
    n.kind = RKind::Assume;
    n.cond = std::move(b);
    return mk(std::move(n));
}

RProg alternation_node(std::vector<Branch> bs) {
    RNode n;
    n.kind = RKind::Alternation;
    n.branches = std::move(bs);
    return mk(std::move(n));
}

RProg gcmd(Expr b, RProg p) {
    if (p.kind() == RKind::Skip) return assumer(std::move(b));
    return condr(std::move(p), std::move(b), miracle());
}

RProg alternation(std::vector<Branch> bs) {
    if (bs.empty()) return chaos();
    return alternation_node(std::move(bs));
}

bool communicates_before_term(const RProg& p) {
    const RNode& n = p.node();
    switch (n.kind) {
        case RKind::DoSimple:
        case RKind::DoOut:
        case RKind::DoIn:
            return true;
        // Miracle and Stop never reach termination, so the requirement holds
        // vacuously. Chaos may do anything, including terminating silently.
        case RKind::Miracle:
        case RKind::Stop:
            return true;
        case RKind::Chaos:
        case RKind::Skip:
        case RKind::Assign:
        case RKind::Assume:
        case RKind::DoIter:  // zero iterations terminate silently
            return false;
        case RKind::Seq:
            return communicates_before_term(n.kids[0]) || communicates_before_term(n.kids[1]);
        case RKind::Guard:
            return communicates_before_term(n.kids[0]);
        case RKind::Cond:
        case RKind::ExtChoice:
        case RKind::NDChoice: {
            for (const RProg& k : n.kids)
                if (!communicates_before_term(k)) return false;
            return true;
        }
        case RKind::Alternation: {
            for (const Branch& b : n.branches)
                if (!communicates_before_term(b.body)) return false;
            return true;
        }
    }
    return false;
}

RProg do_iter_raw(std::vector<Branch> bs) {
    RNode n;
    n.kind = RKind::DoIter;
    n.branches = std::move(bs);
    return mk(std::move(n));
}

RProg do_iter(std::vector<Branch> bs) {
    for (const Branch& b : bs) {
        if (!communicates_before_term(b.body))
            throw std::invalid_argument("iteration branch '" + b.guard.str() +
                                        "' may terminate without communicating");
    }
    return do_iter_raw(std::move(bs));
}

RProg seq_of(std::vector<RProg> parts) {
    if (parts.empty()) return skipr();
    RProg acc = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) acc = seqr(parts[i], acc);
    return acc;
}

bool RProg::operator==(const RProg& o) const {
    if (node_ == o.node_) return true;
    if (!node_ || !o.node_) return false;
    const RNode& a = *node_;
    const RNode& b = *o.node_;
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case RKind::Miracle:
        case RKind::Chaos:
        case RKind::Skip:
        case RKind::Stop:
            return true;
        case RKind::Assign:
            return a.subst == b.subst;
        case RKind::DoSimple:
            return a.chan == b.chan;
        case RKind::DoOut:
            return a.chan == b.chan && a.cond == b.cond;
        case RKind::DoIn:
            return a.chan == b.chan && a.var == b.var;
        case RKind::Guard:
        case RKind::Cond:
        case RKind::Assume:
            return a.cond == b.cond && a.kids == b.kids;
        case RKind::Seq:
        case RKind::ExtChoice:
        case RKind::NDChoice:
            return a.kids == b.kids;
        case RKind::Alternation:
        case RKind::DoIter:
            return a.branches == b.branches;
    }
    return false;
}

// -------------------------------------------------------------------------
// Frame extension
// -------------------------------------------------------------------------

namespace {

struct Renamer {
    const TypeEnv* env = nullptr;  // qualify mode when set
    bool strip = false;            // unqualify mode

    std::string var_name(const std::string& v) const {
        if (strip) {
            std::string pfx = kFramePrefix;
            if (v.rfind(pfx, 0) == 0) return v.substr(pfx.size());
            return v;
        }
        if (v == kActv) throw TypeError("program mentions the control variable 'actv'");
        if (env->vars.count(v)) return kFramePrefix + v;
        return v;
    }

    Expr expr(const Expr& e) const {
        const ExprNode& n = e.node();
        switch (n.kind) {
            case ExprKind::Var: {
                std::string renamed = var_name(n.name);
                return renamed == n.name ? e : Expr::var(renamed);
            }
            case ExprKind::IntLit:
            case ExprKind::BoolLit:
            case ExprKind::EnumLit:
            case ExprKind::EmptySeq:
                return e;
            case ExprKind::App: {
                std::vector<Expr> kids;
                for (const Expr& k : n.kids) kids.push_back(expr(k));
                return Expr::app(n.name, std::move(kids));
            }
            case ExprKind::Unary:
                return Expr::un(n.un, expr(n.kids[0]));
            case ExprKind::Binary:
                return Expr::bin(n.bin, expr(n.kids[0]), expr(n.kids[1]));
            case ExprKind::Forall:
                return Expr::forall(n.name, n.type, expr(n.kids[0]));
        }
        return e;
    }

    Subst subst(const Subst& s) const {
        Subst out;
        for (const auto& [k, v] : s.entries) out.entries.emplace(var_name(k), expr(v));
        return out;
    }

    RProg prog(const RProg& p) const {
        const RNode& n = p.node();
        switch (n.kind) {
            case RKind::Miracle:
            case RKind::Chaos:
            case RKind::Skip:
            case RKind::Stop:
            case RKind::DoSimple:
                return p;
            case RKind::Assign:
                return assignr(subst(n.subst));
            case RKind::DoOut:
                return do_out(n.chan, expr(n.cond));
            case RKind::DoIn:
                return do_in(n.chan, var_name(n.var));
            case RKind::Guard:
                return guardr(expr(n.cond), prog(n.kids[0]));
            case RKind::Seq:
                return seqr(prog(n.kids[0]), prog(n.kids[1]));
            case RKind::Cond:
                return condr(prog(n.kids[0]), expr(n.cond), prog(n.kids[1]));
            case RKind::ExtChoice:
            case RKind::NDChoice: {
                std::vector<RProg> kids;
                for (const RProg& k : n.kids) kids.push_back(prog(k));
                return n.kind == RKind::ExtChoice ? ext_choice(std::move(kids))
                                                  : nd_choice(std::move(kids));
            }
            case RKind::Assume:
                return assumer(expr(n.cond));
            case RKind::Alternation:
            case RKind::DoIter: {
                std::vector<Branch> bs;
                for (const Branch& b : n.branches) bs.push_back({expr(b.guard), prog(b.body)});
                return n.kind == RKind::Alternation ? alternation_node(std::move(bs))
                                                    : do_iter_raw(std::move(bs));
            }
        }
        return p;
    }
};

}  // namespace

RProg frame_extend(const RProg& p, const TypeEnv& env) {
    Renamer r;
    r.env = &env;
    return r.prog(p);
}

Expr frame_extend_expr(const Expr& e, const TypeEnv& env) {
    Renamer r;
    r.env = &env;
    return r.expr(e);
}

RProg unqualify(const RProg& p) {
    Renamer r;
    r.strip = true;
    return r.prog(p);
}

Expr unqualify_expr(const Expr& e) {
    Renamer r;
    r.strip = true;
    return r.expr(e);
}

// -------------------------------------------------------------------------
// Rendering
// -------------------------------------------------------------------------

namespace {

// Binding strength, larger is tighter. Guard is looser than the choices so
// guarded branches inside a choice render parenthesized.
int rprec(RKind k) {
    switch (k) {
        case RKind::Cond: return 10;
        case RKind::Guard: return 18;
        case RKind::NDChoice: return 20;
        case RKind::ExtChoice: return 25;
        case RKind::Seq: return 40;
        default: return 100;
    }
}

std::string out_value(const Expr& v) {
    ExprKind k = v.kind();
    bool atom = k == ExprKind::Var || k == ExprKind::IntLit || k == ExprKind::BoolLit ||
                k == ExprKind::EnumLit || k == ExprKind::EmptySeq || k == ExprKind::App;
    return atom ? v.str() : "(" + v.str() + ")";
}

void render(std::ostream& os, const RProg& p, int min_prec) {
    const RNode& n = p.node();
    int prec = rprec(n.kind);
    bool paren = prec < min_prec;
    if (paren) os << '(';
    switch (n.kind) {
        case RKind::Miracle: os << "Miracle"; break;
        case RKind::Chaos: os << "Chaos"; break;
        case RKind::Skip: os << "Skip"; break;
        case RKind::Stop: os << "Stop"; break;
        case RKind::Assign:
            if (n.subst.entries.size() == 1) {
                const auto& [k, v] = *n.subst.entries.begin();
                os << k << " := " << v.str();
            } else {
                os << '<';
                bool first = true;
                for (const auto& [k, v] : n.subst.entries) {
                    if (!first) os << ", ";
                    first = false;
                    os << k << " := " << v.str();
                }
                os << '>';
            }
            break;
        case RKind::DoSimple: os << n.chan; break;
        case RKind::DoOut: os << n.chan << '!' << out_value(n.cond); break;
        case RKind::DoIn: os << n.chan << '?' << n.var; break;
        case RKind::Guard:
            os << n.cond.str() << " |> ";
            render(os, n.kids[0], prec);
            break;
        case RKind::Seq:
            render(os, n.kids[0], prec + 1);
            os << " ; ";
            render(os, n.kids[1], prec);
            break;
        case RKind::Cond:
            render(os, n.kids[0], prec + 1);
            os << " <| " << n.cond.str() << " |> ";
            render(os, n.kids[1], prec + 1);
            break;
        case RKind::ExtChoice:
        case RKind::NDChoice: {
            const char* sym = n.kind == RKind::ExtChoice ? " [] " : " |~| ";
            if (n.kids.empty()) {
                os << (n.kind == RKind::ExtChoice ? "Stop" : "Chaos");
                break;
            }
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                if (i) os << sym;
                render(os, n.kids[i], prec + 1);
            }
            break;
        }
        case RKind::Assume: os << '[' << n.cond.str() << ']'; break;
        case RKind::Alternation:
        case RKind::DoIter: {
            os << (n.kind == RKind::Alternation ? "if " : "do ");
            for (std::size_t i = 0; i < n.branches.size(); ++i) {
                if (i) os << " | ";
                os << n.branches[i].guard.str() << " -> ";
                render(os, n.branches[i].body, rprec(RKind::Seq));
            }
            os << (n.kind == RKind::Alternation ? " fi" : " od");
            break;
        }
    }
    if (paren) os << ')';
}

}  // namespace

std::string to_text(const RProg& p) {
    std::ostringstream os;
    render(os, p, 0);
    return os.str();
}

std::string to_text_pretty(const RProg& p) {
    // Top-level sequence steps one per line; iteration branches one per line.
    std::vector<RProg> steps;
    RProg cur = p;
    while (cur.kind() == RKind::Seq) {
        steps.push_back(cur.node().kids[0]);
        cur = cur.node().kids[1];
    }
    steps.push_back(cur);

    std::ostringstream os;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const RProg& s = steps[i];
        if (s.kind() == RKind::DoIter) {
            const auto& bs = s.node().branches;
            for (std::size_t j = 0; j < bs.size(); ++j) {
                os << (j == 0 ? "do " : " | ");
                os << bs[j].guard.str() << " -> ";
                std::ostringstream body;
                render(body, bs[j].body, rprec(RKind::Seq));
                os << body.str() << "\n";
            }
            os << "od";
        } else {
            render(os, s, rprec(RKind::Seq) + 1);
        }
        if (i + 1 < steps.size()) os << " ;\n";
    }
    os << "\n";
    return os.str();
}

// -------------------------------------------------------------------------
// Canonical key
// -------------------------------------------------------------------------

namespace {

void key_expr(std::ostream& os, const Expr& e) {
    const ExprNode& n = e.node();
    switch (n.kind) {
        case ExprKind::Var: os << "v" << n.name << ';'; break;
        case ExprKind::IntLit: os << "i" << n.int_val << ';'; break;
        case ExprKind::BoolLit: os << "b" << (n.bool_val ? '1' : '0'); break;
        case ExprKind::EnumLit: os << "e" << n.type.name() << ':' << n.name << ';'; break;
        case ExprKind::EmptySeq: os << "q"; break;
        case ExprKind::App:
            os << "a" << n.name << '(';
            for (const Expr& k : n.kids) key_expr(os, k);
            os << ')';
            break;
        case ExprKind::Unary:
            os << "!(";
            key_expr(os, n.kids[0]);
            os << ')';
            break;
        case ExprKind::Binary:
            os << "o" << static_cast<int>(n.bin) << '(';
            key_expr(os, n.kids[0]);
            key_expr(os, n.kids[1]);
            os << ')';
            break;
        case ExprKind::Forall:
            os << "F" << n.name << '(';
            key_expr(os, n.kids[0]);
            os << ')';
            break;
    }
}

void key_prog(std::ostream& os, const RProg& p) {
    const RNode& n = p.node();
    os << 'K' << static_cast<int>(n.kind) << '(';
    switch (n.kind) {
        case RKind::Assign:
            for (const auto& [k, v] : n.subst.entries) {
                os << k << '=';
                key_expr(os, v);
            }
            break;
        case RKind::DoSimple: os << n.chan; break;
        case RKind::DoOut:
            os << n.chan << '!';
            key_expr(os, n.cond);
            break;
        case RKind::DoIn: os << n.chan << '?' << n.var; break;
        case RKind::Guard:
        case RKind::Assume:
        case RKind::Cond:
            key_expr(os, n.cond);
            break;
        default: break;
    }
    for (const RProg& k : n.kids) key_prog(os, k);
    for (const Branch& b : n.branches) {
        key_expr(os, b.guard);
        os << "->";
        key_prog(os, b.body);
    }
    os << ')';
}

}  // namespace

std::string to_key(const RProg& p) {
    std::ostringstream os;
    key_prog(os, p);
    return os.str();
}

}  // namespace rcv
