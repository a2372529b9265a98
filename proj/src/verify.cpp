#include "rcv/verify.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace rcv {

Property Property::deadlock_freedom() { return Property{PropertyKind::DeadlockFreedom, Expr()}; }

Property Property::state_invariant(Expr inv) {
    return Property{PropertyKind::StateInvariant, std::move(inv)};
}

// -------------------------------------------------------------------------
// Weakest preconditions over machine actions
// -------------------------------------------------------------------------

namespace {

bool contains_forall(const Expr& e) {
    if (e.kind() == ExprKind::Forall) return true;
    for (const auto& k : e.node().kids)
        if (contains_forall(k)) return true;
    return false;
}

Expr wp_action(const TypeEnv& env, const Action& a, Expr post) {
    const ActionNode& n = a.node();
    switch (n.kind) {
        case ActKind::Skip: return post;
        case ActKind::Assign: return subst_apply(Subst{{n.var, n.rhs}}, post);
        case ActKind::Event:
            if (n.event->kind == EventKind::Input)
                return Expr::forall(n.event->var, env.vars.at(n.event->var), std::move(post));
            return post;
        case ActKind::Seq:
            return wp_action(env, n.kids[0], wp_action(env, n.kids[1], std::move(post)));
        case ActKind::If: {
            Expr t = wp_action(env, n.kids[0], post);
            Expr f = wp_action(env, n.kids[1], post);
            return implies(n.cond, t) && implies(!n.cond, f);
        }
    }
    throw InternalError("unhandled action kind in wp");
}

Expr wp_trigger(const TypeEnv& env, const std::optional<EventRef>& trig, Expr post) {
    if (trig && trig->kind == EventKind::Input)
        return Expr::forall(trig->var, env.vars.at(trig->var), std::move(post));
    return post;
}

// Quantifiers produced by wp sit in positive positions only (conjunctions and
// consequents). Hoisting moves them out as obligation binders, renaming when
// the name is already taken.
class Hoister {
public:
    Hoister(std::set<std::string> used) : used_(std::move(used)) {}

    Expr positive(const Expr& e) {
        const ExprNode& n = e.node();
        if (n.kind == ExprKind::Forall) {
            std::string fresh = pick(n.name);
            binders_.push_back({fresh, n.type});
            Expr body = n.kids[0];
            if (fresh != n.name) body = subst_apply(Subst{{n.name, Expr::var(fresh)}}, body);
            return positive(body);
        }
        if (n.kind == ExprKind::Binary && n.bin == BinOp::And)
            return positive(n.kids[0]) && positive(n.kids[1]);
        if (n.kind == ExprKind::Binary && n.bin == BinOp::Implies) {
            if (contains_forall(n.kids[0]))
                throw InternalError("quantifier in negative position");
            return implies(n.kids[0], positive(n.kids[1]));
        }
        if (contains_forall(e)) throw InternalError("quantifier in opaque position");
        return e;
    }

    std::vector<Binder> take_binders() { return std::move(binders_); }

private:
    std::string pick(const std::string& base) {
        std::string name = base;
        for (int k = 2; used_.count(name); ++k) name = base + std::to_string(k);
        used_.insert(name);
        return name;
    }

    std::set<std::string> used_;
    std::vector<Binder> binders_;
};

std::set<std::string> names_in_scope(const TypeEnv& env, const Expr& e) {
    std::set<std::string> used;
    for (const auto& [k, v] : env.vars) used.insert(k);
    for (const auto& [k, v] : env.consts) used.insert(k);
    for (const auto& n : e.free_vars()) used.insert(n);
    return used;
}

}  // namespace

// -------------------------------------------------------------------------
// Obligation generation
// -------------------------------------------------------------------------

std::vector<Obligation> gen_obligations(const CompiledMachine& m, const Property& p) {
    std::vector<Obligation> out;
    if (p.kind == PropertyKind::DeadlockFreedom) {
        std::vector<Expr> guards;
        for (const auto& n : m.mviews.inters)
            guards.push_back(eq(Expr::var(kActv), Expr::enum_lit(m.actv_type, n.name)));
        Expr disj = or_of(guards);
        Obligation init;
        init.id = "init";
        init.origin = "initialisation reaches an active node";
        init.body = subst_apply(Subst{{kActv, Expr::enum_lit(m.actv_type, m.mviews.ninit.name)}},
                                disj);
        out.push_back(std::move(init));

        for (const auto& n : m.mviews.inters) {
            NodeNormalForm nf = normalize_node(m.per_node.at(n.name));
            std::vector<Expr> conj;
            for (const auto& path : nf.paths) conj.push_back(nf.coverage(path));
            Obligation ob;
            ob.id = n.name;
            ob.node = n.name;
            ob.origin = "node " + n.name + " enables a transition in every stable state";
            for (const auto& [ghost, orig] : nf.havocs)
                ob.binders.push_back({ghost, m.base_env.vars.at(orig)});
            ob.body = and_of(conj);
            out.push_back(std::move(ob));
        }
        return out;
    }

    // State invariant. The inductive points are node arrivals: directly after
    // the control update, before the entry action runs.
    const Expr& inv = p.invariant;
    type_check(m.base_env, inv, Type::boolean());

    Obligation init;
    init.id = "init";
    init.origin = "invariant holds on arrival at " + m.mviews.ninit.name;
    init.body = inv;
    out.push_back(std::move(init));

    for (const auto& n : m.mviews.inters) {
        std::vector<Expr> conj;
        for (const auto& t : m.mviews.tmap.at(n.name)) {
            Expr after = wp_trigger(
                m.base_env, t.trigger,
                wp_action(m.base_env, n.exit, wp_action(m.base_env, t.act, inv)));
            conj.push_back(implies(t.cond, after));
        }
        Expr chain = implies(inv, wp_action(m.base_env, n.entry, and_of(conj)));
        Hoister h(names_in_scope(m.base_env, chain));
        Expr body = h.positive(chain);
        Obligation ob;
        ob.id = n.name;
        ob.node = n.name;
        ob.origin = "invariant preserved across every transition out of " + n.name;
        ob.binders = h.take_binders();
        ob.body = std::move(body);
        out.push_back(std::move(ob));
    }
    return out;
}

// -------------------------------------------------------------------------
// Decision: fold, abstract, enumerate
// -------------------------------------------------------------------------

namespace {

struct Dim {
    std::string name;     // variable or unknown
    std::string display;  // original term for unknowns
    Type type;
};

struct Abstraction {
    Expr body;
    std::vector<Dim> dims;        // in fixed order: binders, variables, unknowns
    bool admissible = true;       // enumeration complete for this body
    std::string why_not;          // reason when not
};

// Replaces maximal function applications by fresh unknowns, congruent by
// printed term. Reuses of a symbol with different arguments are left to the
// solver: enumeration cannot certify functional consistency across them.
class Abstractor {
public:
    Abstractor(const TypeEnv& env) : env_(env) {}

    Expr abstract(const Expr& e) {
        const ExprNode& n = e.node();
        if (n.kind == ExprKind::App) {
            std::string key = e.str();
            auto it = seen_.find(key);
            if (it != seen_.end()) return Expr::var(it->second);
            auto sig = env_.funs.find(n.name);
            if (sig == env_.funs.end()) throw InternalError("unknown function " + n.name);
            std::string u = "?u" + std::to_string(seen_.size() + 1);
            seen_[key] = u;
            unknowns_.push_back({u, key, sig->second.result});
            if (!fun_args_.emplace(n.name, key).second && fun_args_[n.name] != key)
                reused_symbol_ = n.name;
            return Expr::var(u);
        }
        if (n.kids.empty()) return e;
        std::vector<Expr> kids;
        for (const auto& k : n.kids) kids.push_back(abstract(k));
        switch (n.kind) {
            case ExprKind::Unary: return Expr::un(n.un, kids[0]);
            case ExprKind::Binary: return Expr::bin(n.bin, kids[0], kids[1]);
            case ExprKind::Forall: return Expr::forall(n.name, n.type, kids[0]);
            default: return e;
        }
    }

    const std::vector<Dim>& unknowns() const { return unknowns_; }
    const std::string& reused_symbol() const { return reused_symbol_; }

private:
    const TypeEnv& env_;
    std::map<std::string, std::string> seen_;      // printed term -> unknown
    std::map<std::string, std::string> fun_args_;  // symbol -> first printed term
    std::vector<Dim> unknowns_;
    std::string reused_symbol_;
};

bool is_int_dim(const Expr& e, const std::map<std::string, Type>& dimtypes) {
    if (e.kind() != ExprKind::Var) return false;
    auto it = dimtypes.find(e.node().name);
    return it != dimtypes.end() && it->second.kind() == TypeKind::Int;
}

bool is_eq_side_ok(const Expr& s, const Expr& o, const std::map<std::string, Type>& dimtypes,
                   std::string& why) {
    if (!is_int_dim(s, dimtypes)) return true;
    if (o.kind() == ExprKind::IntLit) return true;
    why = "integer " + s.node().name + " compared against a non-literal";
    return false;
}

// Enumeration is complete only without integer order or arithmetic atoms,
// and with integers compared against literals alone.
bool admissible_rec(const Expr& e, const std::map<std::string, Type>& dimtypes, std::string& why) {
    const ExprNode& n = e.node();
    if (n.kind == ExprKind::Binary) {
        switch (n.bin) {
            case BinOp::Lt:
            case BinOp::Le:
            case BinOp::Add:
            case BinOp::Sub:
            case BinOp::Mul:
                why = "integer order or arithmetic atom " + e.str();
                return false;
            case BinOp::Eq:
            case BinOp::Neq:
                if (!is_eq_side_ok(n.kids[0], n.kids[1], dimtypes, why)) return false;
                if (!is_eq_side_ok(n.kids[1], n.kids[0], dimtypes, why)) return false;
                break;
            default: break;
        }
    }
    for (const auto& k : n.kids)
        if (!admissible_rec(k, dimtypes, why)) return false;
    return true;
}

void collect_int_lits(const Expr& e, std::set<std::int64_t>& out) {
    if (e.kind() == ExprKind::IntLit) out.insert(e.node().int_val);
    for (const auto& k : e.node().kids) collect_int_lits(k, out);
}

std::string token_type_name(const Type& t) {
    return (t.kind() == TypeKind::Seq ? "$seq:" : "$abs:") + t.str();
}

// Opaque equality-only types get a synthetic enumeration as carrier: one
// value per dimension plus one extra, plus the empty sequence.
Type token_type(const Type& t, int ndims) {
    std::vector<std::string> ctors;
    if (t.kind() == TypeKind::Seq) ctors.push_back("$empty");
    for (int k = 1; k <= std::max(2, ndims + 1); ++k) ctors.push_back("$v" + std::to_string(k));
    return Type::enumeration(token_type_name(t), ctors);
}

// Rewrites <> literals to the $empty token of the matching synthetic type,
// determined from the variable on the other side of the comparison.
Expr retoken_empty(const Expr& e, const std::map<std::string, Type>& dimtypes,
                   const std::map<std::string, Type>& tokens, bool& ok) {
    const ExprNode& n = e.node();
    if (n.kind == ExprKind::EmptySeq) {
        ok = false;  // reached outside a comparison against a typed variable
        return e;
    }
    if (n.kind == ExprKind::Binary && (n.bin == BinOp::Eq || n.bin == BinOp::Neq)) {
        Expr l = n.kids[0], r = n.kids[1];
        for (int side = 0; side < 2; ++side) {
            Expr& me = side ? r : l;
            Expr& other = side ? l : r;
            if (me.kind() != ExprKind::EmptySeq) continue;
            if (other.kind() != ExprKind::Var) {
                ok = false;
                return e;
            }
            auto ty = dimtypes.find(other.node().name);
            if (ty == dimtypes.end() || ty->second.kind() != TypeKind::Seq) {
                ok = false;
                return e;
            }
            me = Expr::enum_lit(tokens.at(token_type_name(ty->second)), "$empty");
        }
        return Expr::bin(n.bin, retoken_empty(l, dimtypes, tokens, ok),
                         retoken_empty(r, dimtypes, tokens, ok));
    }
    if (n.kids.empty()) return e;
    std::vector<Expr> kids;
    for (const auto& k : n.kids) kids.push_back(retoken_empty(k, dimtypes, tokens, ok));
    switch (n.kind) {
        case ExprKind::Unary: return Expr::un(n.un, kids[0]);
        case ExprKind::Binary: return Expr::bin(n.bin, kids[0], kids[1]);
        case ExprKind::Forall: return Expr::forall(n.name, n.type, kids[0]);
        default: return e;
    }
}

std::string value_display(const Expr& v) {
    if (v.kind() == ExprKind::EnumLit) {
        const std::string& c = v.node().name;
        if (c == "$empty") return "<>";
        if (c.rfind("$v", 0) == 0) return "#" + c.substr(2);
        return c;
    }
    return v.str();
}

constexpr std::size_t kEnumCap = 65536;

}  // namespace

Decision decide(const TypeEnv& env, const Obligation& ob) {
    Decision d;

    // Constants with declared initializers are fixed values.
    Subst init_consts;
    for (const auto& [name, val] : env.const_inits) init_consts.entries[name] = val;
    Expr body = constant_fold(subst_apply(init_consts, ob.body));

    if (is_true(body)) {
        d.verdict = Decision::Verdict::Valid;
        d.procedure = "folding";
        return d;
    }
    if (is_false(body)) {
        d.verdict = Decision::Verdict::Invalid;
        d.procedure = "folding";
        d.witness = "falsified at every valuation";
        return d;
    }

    Abstractor abs(env);
    Expr abstracted = constant_fold(abs.abstract(body));
    if (is_true(abstracted)) {
        // Possible when congruent applications cancel, e.g. f(x) = f(x).
        d.verdict = Decision::Verdict::Valid;
        d.procedure = "folding";
        return d;
    }

    auto smt_residual = [&](const std::string& why) {
        Decision u;
        u.verdict = Decision::Verdict::Unknown;
        u.procedure = "smt-residual";
        u.witness = why;
        return u;
    };

    if (!abs.reused_symbol().empty())
        return smt_residual("function " + abs.reused_symbol() + " applied to distinct arguments");

    // Dimensions: binders, then free state variables and rigid constants,
    // then abstracted applications.
    std::vector<Dim> dims;
    std::map<std::string, Type> dimtypes;
    auto add_dim = [&](Dim dim) {
        dimtypes[dim.name] = dim.type;
        dims.push_back(std::move(dim));
    };
    std::set<std::string> bound;
    for (const auto& b : ob.binders) bound.insert(b.name);
    std::vector<std::string> frees = abstracted.free_vars();
    std::set<std::string> freeset(frees.begin(), frees.end());
    for (const auto& b : ob.binders)
        if (freeset.count(b.name)) add_dim({b.name, b.name, b.type});
    for (const auto& name : frees) {
        if (bound.count(name) || name.rfind("?u", 0) == 0) continue;
        auto t = env.lookup_value(name);
        if (!t) throw InternalError("obligation mentions unknown name " + name);
        add_dim({name, name, *t});
    }
    for (const auto& u : abs.unknowns())
        if (freeset.count(u.name)) add_dim(u);

    std::string why;
    if (!admissible_rec(abstracted, dimtypes, why)) return smt_residual(why);

    // Carriers.
    std::set<std::int64_t> lits;
    collect_int_lits(abstracted, lits);
    std::map<std::string, int> opaque_counts;
    for (const auto& dim : dims) {
        if (dim.type.kind() == TypeKind::Seq || dim.type.kind() == TypeKind::Abstract)
            opaque_counts[token_type_name(dim.type)]++;
    }
    std::map<std::string, Type> tokens;
    for (const auto& dim : dims) {
        std::string key = token_type_name(dim.type);
        if (opaque_counts.count(key) && !tokens.count(key))
            tokens[key] = token_type(dim.type, opaque_counts[key]);
    }

    bool retoken_ok = true;
    Expr enum_body = retoken_empty(abstracted, dimtypes, tokens, retoken_ok);
    if (!retoken_ok) return smt_residual("empty sequence literal outside a variable comparison");

    std::vector<std::vector<Expr>> carriers;
    bool any_enum = false, any_opaque = false;
    for (const auto& dim : dims) {
        std::vector<Expr> vals;
        switch (dim.type.kind()) {
            case TypeKind::Bool:
                vals = {Expr::bool_lit(false), Expr::bool_lit(true)};
                break;
            case TypeKind::Enum:
                any_enum = true;
                for (const auto& c : dim.type.constructors())
                    vals.push_back(Expr::enum_lit(dim.type, c));
                break;
            case TypeKind::Int: {
                any_opaque = true;
                for (auto v : lits) vals.push_back(Expr::int_lit(v));
                vals.push_back(Expr::int_lit(lits.empty() ? 0 : *lits.rbegin() + 1));
                break;
            }
            case TypeKind::Seq:
            case TypeKind::Abstract: {
                any_opaque = true;
                const Type& tok = tokens.at(token_type_name(dim.type));
                for (const auto& c : tok.constructors()) vals.push_back(Expr::enum_lit(tok, c));
                break;
            }
        }
        carriers.push_back(std::move(vals));
    }

    std::size_t combos = 1;
    for (const auto& c : carriers) {
        combos *= c.size();
        if (combos > kEnumCap) return smt_residual("enumeration space too large");
    }

    std::string procedure = any_enum          ? "enum-enumeration"
                            : any_opaque      ? "equality-enumeration"
                                              : "boolean-abstraction";

    std::vector<std::size_t> idx(dims.size(), 0);
    while (true) {
        Subst assign;
        for (std::size_t k = 0; k < dims.size(); ++k)
            assign.entries[dims[k].name] = carriers[k][idx[k]];
        Expr val = constant_fold(subst_apply(assign, enum_body));
        if (is_false(val)) {
            d.verdict = Decision::Verdict::Invalid;
            d.procedure = procedure;
            std::string w;
            for (std::size_t k = 0; k < dims.size(); ++k) {
                if (k) w += ", ";
                w += dims[k].display + " = " + value_display(carriers[k][idx[k]]);
            }
            d.witness = w;
            return d;
        }
        if (!is_true(val)) return smt_residual("atom outside the enumerable fragment");
        std::size_t k = dims.size();
        bool done = true;
        while (k > 0) {
            --k;
            if (++idx[k] < carriers[k].size()) {
                done = false;
                break;
            }
            idx[k] = 0;
        }
        if (done) break;
    }
    d.verdict = Decision::Verdict::Valid;
    d.procedure = procedure;
    return d;
}

// -------------------------------------------------------------------------
// SMT-LIB export
// -------------------------------------------------------------------------

namespace {

bool plain_symbol(const std::string& s) {
    if (s.empty() || (std::isdigit((unsigned char)s[0]) != 0)) return false;
    for (char c : s) {
        if (std::isalnum((unsigned char)c) || c == '_' || c == '$' || c == '!' || c == '.' ||
            c == '?' || c == '-')
            continue;
        return false;
    }
    return true;
}

std::string sym(const std::string& s) { return plain_symbol(s) ? s : "|" + s + "|"; }

std::string sort_name(const Type& t) {
    switch (t.kind()) {
        case TypeKind::Bool: return "Bool";
        case TypeKind::Int: return "Int";
        case TypeKind::Enum:
        case TypeKind::Abstract: return sym(t.name());
        case TypeKind::Seq: return sym("Seq." + t.str());
    }
    return "?";
}

struct SmtDecls {
    std::map<std::string, Type> sorts;     // by sort name, Bool/Int excluded
    std::map<std::string, FunSig> funs;    // mentioned applications
};

void collect_type(const Type& t, SmtDecls& d) {
    switch (t.kind()) {
        case TypeKind::Bool:
        case TypeKind::Int: return;
        case TypeKind::Enum:
        case TypeKind::Abstract:
            d.sorts.emplace(sort_name(t), t);
            return;
        case TypeKind::Seq:
            d.sorts.emplace(sort_name(t), t);
            collect_type(t.elem(), d);
            return;
    }
}

void collect_apps(const Expr& e, const TypeEnv& env, SmtDecls& d) {
    if (e.kind() == ExprKind::App) {
        auto it = env.funs.find(e.node().name);
        if (it == env.funs.end()) throw InternalError("unknown function " + e.node().name);
        d.funs.emplace(e.node().name, it->second);
        for (const auto& t : it->second.params) collect_type(t, d);
        collect_type(it->second.result, d);
    }
    if (e.kind() == ExprKind::EnumLit) collect_type(e.node().type, d);
    if (e.kind() == ExprKind::Forall) collect_type(e.node().type, d);
    for (const auto& k : e.node().kids) collect_apps(k, env, d);
}

std::string empty_const(const Type& seq_t) { return sym("empty." + seq_t.str()); }

std::string smt_expr(const TypeEnv& env, const Expr& e, const std::optional<Type>& expected) {
    const ExprNode& n = e.node();
    switch (n.kind) {
        case ExprKind::Var: return sym(n.name);
        case ExprKind::IntLit:
            return n.int_val < 0 ? "(- " + std::to_string(-n.int_val) + ")"
                                 : std::to_string(n.int_val);
        case ExprKind::BoolLit: return n.bool_val ? "true" : "false";
        case ExprKind::EnumLit: return sym(n.name);
        case ExprKind::EmptySeq:
            if (!expected || expected->kind() != TypeKind::Seq)
                throw InternalError("untyped empty sequence in SMT export");
            return empty_const(*expected);
        case ExprKind::App: {
            const FunSig& sig = env.funs.at(n.name);
            std::string out = "(" + sym(n.name);
            for (std::size_t k = 0; k < n.kids.size(); ++k)
                out += " " + smt_expr(env, n.kids[k], sig.params[k]);
            return out + ")";
        }
        case ExprKind::Unary:
            return "(not " + smt_expr(env, n.kids[0], Type::boolean()) + ")";
        case ExprKind::Forall: {
            TypeEnv inner = env;
            inner.vars[n.name] = n.type;
            return "(forall ((" + sym(n.name) + " " + sort_name(n.type) + ")) " +
                   smt_expr(inner, n.kids[0], Type::boolean()) + ")";
        }
        case ExprKind::Binary: {
            const Expr& l = n.kids[0];
            const Expr& r = n.kids[1];
            auto bool2 = [&](const char* op) {
                return std::string("(") + op + " " + smt_expr(env, l, Type::boolean()) + " " +
                       smt_expr(env, r, Type::boolean()) + ")";
            };
            auto int2 = [&](const char* op) {
                return std::string("(") + op + " " + smt_expr(env, l, Type::integer()) + " " +
                       smt_expr(env, r, Type::integer()) + ")";
            };
            switch (n.bin) {
                case BinOp::And: return bool2("and");
                case BinOp::Or: return bool2("or");
                case BinOp::Implies: return bool2("=>");
                case BinOp::Eq:
                case BinOp::Neq: {
                    std::optional<Type> lt, rt;
                    if (l.kind() != ExprKind::EmptySeq) lt = type_check(env, l);
                    if (r.kind() != ExprKind::EmptySeq) rt = type_check(env, r);
                    std::optional<Type> side = lt ? lt : rt;
                    std::string ls = smt_expr(env, l, side);
                    std::string rs = smt_expr(env, r, side);
                    std::string eq = "(= " + ls + " " + rs + ")";
                    return n.bin == BinOp::Eq ? eq : "(not " + eq + ")";
                }
                case BinOp::Lt: return int2("<");
                case BinOp::Le: return int2("<=");
                case BinOp::Add: return int2("+");
                case BinOp::Sub: return int2("-");
                case BinOp::Mul: return int2("*");
            }
            break;
        }
    }
    throw InternalError("unhandled expression in SMT export");
}

}  // namespace

std::string emit_smt(const TypeEnv& env, const Obligation& ob, const std::string& title) {
    Subst init_consts;
    for (const auto& [name, val] : env.const_inits) init_consts.entries[name] = val;
    Expr body = constant_fold(subst_apply(init_consts, ob.body));

    TypeEnv scoped = env;
    for (const auto& b : ob.binders)
        if (!scoped.vars.count(b.name)) scoped.vars[b.name] = b.type;

    SmtDecls decls;
    collect_apps(body, scoped, decls);
    std::vector<std::pair<std::string, Type>> consts;
    std::set<std::string> declared;
    for (const auto& b : ob.binders) {
        if (declared.insert(b.name).second) {
            consts.push_back({b.name, b.type});
            collect_type(b.type, decls);
        }
    }
    for (const auto& name : body.free_vars()) {
        if (declared.count(name)) continue;
        auto t = scoped.lookup_value(name);
        if (!t) throw InternalError("free name " + name + " missing from environment");
        declared.insert(name);
        consts.push_back({name, *t});
        collect_type(*t, decls);
    }

    std::ostringstream out;
    out << "; " << title << ": " << ob.origin << "\n";
    out << "; valid iff unsat\n";
    out << "(set-logic ALL)\n";
    for (const auto& [name, t] : decls.sorts) {
        if (t.kind() == TypeKind::Enum) {
            out << "(declare-datatypes ((" << name << " 0)) ((";
            for (const auto& c : t.constructors()) out << "(" << sym(c) << ")";
            out << ")))\n";
        } else {
            out << "(declare-sort " << name << " 0)\n";
        }
    }
    for (const auto& [name, t] : decls.sorts) {
        if (t.kind() == TypeKind::Seq)
            out << "(declare-const " << empty_const(t) << " " << name << ")\n";
    }
    for (const auto& [name, sig] : decls.funs) {
        out << "(declare-fun " << sym(name) << " (";
        for (std::size_t k = 0; k < sig.params.size(); ++k)
            out << (k ? " " : "") << sort_name(sig.params[k]);
        out << ") " << sort_name(sig.result) << ")\n";
    }
    for (const auto& [name, t] : consts)
        out << "(declare-const " << sym(name) << " " << sort_name(t) << ")\n";
    out << "(assert (not " << smt_expr(scoped, body, Type::boolean()) << "))\n";
    out << "(check-sat)\n";
    return out.str();
}

// -------------------------------------------------------------------------
// Top level
// -------------------------------------------------------------------------

Report verify(const CompiledMachine& m, const Property& p) {
    Report r;
    r.machine = m.name;
    r.property = p.kind;
    r.property_text =
        p.kind == PropertyKind::DeadlockFreedom ? "deadlock-freedom" : "invariant " + p.invariant.str();
    bool refuted = false, residual = false;
    for (auto& ob : gen_obligations(m, p)) {
        ObligationResult res;
        res.decision = decide(m.base_env, ob);
        if (res.decision.verdict == Decision::Verdict::Invalid) refuted = true;
        if (res.decision.verdict == Decision::Verdict::Unknown) {
            residual = true;
            res.smt = emit_smt(m.base_env, ob, m.name + "." + ob.id);
        }
        res.obligation = std::move(ob);
        r.obligations.push_back(std::move(res));
    }
    r.outcome = refuted    ? Report::Outcome::Refuted
                : residual ? Report::Outcome::Residual
                           : Report::Outcome::Verified;
    return r;
}

std::string report_text(const Report& r) {
    std::ostringstream out;
    out << "machine " << r.machine << "  property " << r.property_text << "\n";
    int valid = 0, invalid = 0, unknown = 0;
    for (const auto& res : r.obligations) {
        const char* tag = "unknown  ";
        switch (res.decision.verdict) {
            case Decision::Verdict::Valid:
                tag = "valid    ";
                ++valid;
                break;
            case Decision::Verdict::Invalid:
                tag = "refuted  ";
                ++invalid;
                break;
            case Decision::Verdict::Unknown: ++unknown; break;
        }
        out << "  " << tag << res.obligation.id << " [" << res.decision.procedure << "] "
            << res.obligation.origin;
        if (res.decision.verdict == Decision::Verdict::Invalid)
            out << "\n           witness: " << res.decision.witness;
        if (res.decision.verdict == Decision::Verdict::Unknown && !res.decision.witness.empty())
            out << "\n           reason: " << res.decision.witness;
        out << "\n";
    }
    const char* verdict = r.outcome == Report::Outcome::Verified  ? "verified"
                          : r.outcome == Report::Outcome::Refuted ? "refuted"
                                                                  : "residual";
    out << "outcome " << verdict << " (" << r.obligations.size() << " obligations: " << valid
        << " valid, " << invalid << " refuted, " << unknown << " residual)\n";
    return out.str();
}

}  // namespace rcv
