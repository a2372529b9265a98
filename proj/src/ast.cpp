#include "rcv/ast.hpp"

#include <algorithm>
#include <sstream>

namespace rcv {

// -------------------------------------------------------------------------
// Type
// -------------------------------------------------------------------------

Type Type::boolean() {
    static const auto n = std::make_shared<const Node>(Node{TypeKind::Bool, "", {}, nullptr});
    return Type(n);
}

Type Type::integer() {
    static const auto n = std::make_shared<const Node>(Node{TypeKind::Int, "", {}, nullptr});
    return Type(n);
}

Type Type::enumeration(std::string name, std::vector<std::string> ctors) {
    return Type(std::make_shared<const Node>(Node{TypeKind::Enum, std::move(name), std::move(ctors), nullptr}));
}

Type Type::seq(Type elem) {
    return Type(std::make_shared<const Node>(Node{TypeKind::Seq, "", {}, elem.node_}));
}

Type Type::abstract(std::string name) {
    return Type(std::make_shared<const Node>(Node{TypeKind::Abstract, std::move(name), {}, nullptr}));
}

TypeKind Type::kind() const { return node_->kind; }
const std::string& Type::name() const { return node_->name; }
const std::vector<std::string>& Type::constructors() const { return node_->ctors; }

Type Type::elem() const { return Type(node_->elem); }

bool Type::operator==(const Type& o) const {
    if (node_ == o.node_) return true;
    if (!node_ || !o.node_) return false;
    if (node_->kind != o.node_->kind) return false;
    switch (node_->kind) {
        case TypeKind::Bool:
        case TypeKind::Int: return true;
        case TypeKind::Enum: return node_->name == o.node_->name && node_->ctors == o.node_->ctors;
        case TypeKind::Abstract: return node_->name == o.node_->name;
        case TypeKind::Seq: return Type(node_->elem) == Type(o.node_->elem);
    }
    return false;
}

std::string Type::str() const {
    switch (node_->kind) {
        case TypeKind::Bool: return "bool";
        case TypeKind::Int: return "int";
        case TypeKind::Enum:
        case TypeKind::Abstract: return node_->name;
        case TypeKind::Seq: return "Seq(" + Type(node_->elem).str() + ")";
    }
    return "?";
}

// -------------------------------------------------------------------------
// Expr construction
// -------------------------------------------------------------------------

Expr Expr::mk(ExprNode n) { return Expr(std::make_shared<const ExprNode>(std::move(n))); }

Expr Expr::var(std::string name) {
    ExprNode n;
    n.kind = ExprKind::Var;
    n.name = std::move(name);
    return mk(std::move(n));
}

Expr Expr::int_lit(std::int64_t v) {
    ExprNode n;
    n.kind = ExprKind::IntLit;
    n.int_val = v;
    return mk(std::move(n));
}

Expr Expr::bool_lit(bool v) {
    ExprNode n;
    n.kind = ExprKind::BoolLit;
    n.bool_val = v;
    return mk(std::move(n));
}

Expr Expr::enum_lit(Type enum_type, std::string ctor) {
    ExprNode n;
    n.kind = ExprKind::EnumLit;
    n.type = std::move(enum_type);
    n.name = std::move(ctor);
    return mk(std::move(n));
}

Expr Expr::empty_seq() {
    ExprNode n;
    n.kind = ExprKind::EmptySeq;
    return mk(std::move(n));
}

Expr Expr::app(std::string fn, std::vector<Expr> args) {
    ExprNode n;
    n.kind = ExprKind::App;
    n.name = std::move(fn);
    n.kids = std::move(args);
    return mk(std::move(n));
}

Expr Expr::un(UnOp op, Expr e) {
    ExprNode n;
    n.kind = ExprKind::Unary;
    n.un = op;
    n.kids = {std::move(e)};
    return mk(std::move(n));
}

Expr Expr::bin(BinOp op, Expr lhs, Expr rhs) {
    ExprNode n;
    n.kind = ExprKind::Binary;
    n.bin = op;
    n.kids = {std::move(lhs), std::move(rhs)};
    return mk(std::move(n));
}

Expr Expr::forall(std::string binder, Type t, Expr body) {
    ExprNode n;
    n.kind = ExprKind::Forall;
    n.name = std::move(binder);
    n.type = std::move(t);
    n.kids = {std::move(body)};
    return mk(std::move(n));
}


bool Expr::operator==(const Expr& o) const {
    if (node_ == o.node_) return true;
    if (!node_ || !o.node_) return false;
    const ExprNode& a = *node_;
    const ExprNode& b = *o.node_;
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprKind::Var: return a.name == b.name;
        case ExprKind::IntLit: return a.int_val == b.int_val;
        case ExprKind::BoolLit: return a.bool_val == b.bool_val;
        case ExprKind::EnumLit: return a.name == b.name && a.type == b.type;
        case ExprKind::EmptySeq: return true;
        case ExprKind::App:
            if (a.name != b.name) return false;
            break;
        case ExprKind::Unary:
            if (a.un != b.un) return false;
            break;
        case ExprKind::Binary:
            if (a.bin != b.bin) return false;
            break;
        case ExprKind::Forall:
            if (a.name != b.name || !(a.type == b.type)) return false;
            break;
    }
    return a.kids == b.kids;
}

bool is_true(const Expr& e) { return e.valid() && e.kind() == ExprKind::BoolLit && e.node().bool_val; }
bool is_false(const Expr& e) { return e.valid() && e.kind() == ExprKind::BoolLit && !e.node().bool_val; }

Expr operator&&(const Expr& a, const Expr& b) { return Expr::bin(BinOp::And, a, b); }
Expr operator||(const Expr& a, const Expr& b) { return Expr::bin(BinOp::Or, a, b); }
Expr operator!(const Expr& a) { return Expr::un(UnOp::Not, a); }
Expr implies(const Expr& a, const Expr& b) { return Expr::bin(BinOp::Implies, a, b); }
Expr eq(const Expr& a, const Expr& b) { return Expr::bin(BinOp::Eq, a, b); }

Expr or_of(const std::vector<Expr>& es) {
    if (es.empty()) return Expr::bool_lit(false);
    Expr acc = es.back();
    for (std::size_t i = es.size() - 1; i-- > 0;) acc = es[i] || acc;
    return acc;
}

Expr and_of(const std::vector<Expr>& es) {
    if (es.empty()) return Expr::bool_lit(true);
    Expr acc = es.back();
    for (std::size_t i = es.size() - 1; i-- > 0;) acc = es[i] && acc;
    return acc;
}

// -------------------------------------------------------------------------
// Printing
// -------------------------------------------------------------------------

namespace {

// Larger binds tighter. Comparison operands are printed at atom level to keep
// chains like a = b = c from appearing.
int prec_of(const ExprNode& n) {
    switch (n.kind) {
        case ExprKind::Forall: return 10;
        case ExprKind::Binary:
            switch (n.bin) {
                case BinOp::Implies: return 30;
                case BinOp::Or: return 40;
                case BinOp::And: return 50;
                case BinOp::Eq:
                case BinOp::Neq:
                case BinOp::Lt:
                case BinOp::Le: return 60;
                case BinOp::Add:
                case BinOp::Sub: return 70;
                case BinOp::Mul: return 80;
            }
            return 0;
        case ExprKind::Unary: return 90;
        default: return 100;
    }
}

const char* bin_sym(BinOp op) {
    switch (op) {
        case BinOp::And: return "and";
        case BinOp::Or: return "or";
        case BinOp::Implies: return "=>";
        case BinOp::Eq: return "=";
        case BinOp::Neq: return "!=";
        case BinOp::Lt: return "<";
        case BinOp::Le: return "<=";
        case BinOp::Add: return "+";
        case BinOp::Sub: return "-";
        case BinOp::Mul: return "*";
    }
    return "?";
}

void print_expr(std::ostream& os, const Expr& e, int min_prec) {
    const ExprNode& n = e.node();
    int p = prec_of(n);
    bool paren = p < min_prec;
    if (paren) os << '(';
    switch (n.kind) {
        case ExprKind::Var: os << n.name; break;
        case ExprKind::IntLit: os << n.int_val; break;
        case ExprKind::BoolLit: os << (n.bool_val ? "true" : "false"); break;
        case ExprKind::EnumLit: os << n.name; break;
        case ExprKind::EmptySeq: os << "<>"; break;
        case ExprKind::App: {
            os << n.name << '(';
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                if (i) os << ", ";
                print_expr(os, n.kids[i], 0);
            }
            os << ')';
            break;
        }
        case ExprKind::Unary:
            os << "not ";
            print_expr(os, n.kids[0], p + 1);
            break;
        case ExprKind::Binary: {
            // Left-assoc for arithmetic, right-assoc for the logic chain,
            // non-assoc for comparisons.
            int lp = p, rp = p + 1;
            if (n.bin == BinOp::And || n.bin == BinOp::Or || n.bin == BinOp::Implies) {
                lp = p + 1;
                rp = p;
            } else if (n.bin == BinOp::Eq || n.bin == BinOp::Neq || n.bin == BinOp::Lt ||
                       n.bin == BinOp::Le) {
                lp = p + 1;
                rp = p + 1;
            }
            print_expr(os, n.kids[0], lp);
            os << ' ' << bin_sym(n.bin) << ' ';
            print_expr(os, n.kids[1], rp);
            break;
        }
        case ExprKind::Forall:
            os << "forall " << n.name << " : " << n.type.str() << " . ";
            print_expr(os, n.kids[0], p);
            break;
    }
    if (paren) os << ')';
}

}  // namespace

std::string Expr::str() const {
    std::ostringstream os;
    print_expr(os, *this, 0);
    return os.str();
}

namespace {
void collect_free(const Expr& e, std::set<std::string>& bound, std::vector<std::string>& out,
                  std::set<std::string>& seen) {
    const ExprNode& n = e.node();
    switch (n.kind) {
        case ExprKind::Var:
            if (!bound.count(n.name) && seen.insert(n.name).second) out.push_back(n.name);
            return;
        case ExprKind::Forall: {
            bool was_bound = bound.count(n.name) > 0;
            bound.insert(n.name);
            collect_free(n.kids[0], bound, out, seen);
            if (!was_bound) bound.erase(n.name);
            return;
        }
        default:
            for (const Expr& k : n.kids) collect_free(k, bound, out, seen);
    }
}
}  // namespace

std::vector<std::string> Expr::free_vars() const {
    std::vector<std::string> out;
    std::set<std::string> bound, seen;
    collect_free(*this, bound, out, seen);
    return out;
}

bool Expr::mentions(const std::string& name) const {
    auto fv = free_vars();
    return std::find(fv.begin(), fv.end(), name) != fv.end();
}

// -------------------------------------------------------------------------
// TypeEnv
// -------------------------------------------------------------------------

void TypeEnv::check_fresh(const std::string& n) const {
    if (known_name(n)) throw TypeError("duplicate declaration of '" + n + "'");
}

bool TypeEnv::known_name(const std::string& n) const {
    return vars.count(n) || consts.count(n) || funs.count(n) || events.count(n) ||
           named_types.count(n) || lookup_ctor(n).has_value();
}

void TypeEnv::declare_var(const std::string& n, Type t) {
    check_fresh(n);
    vars.emplace(n, std::move(t));
    var_order.push_back(n);
}

void TypeEnv::declare_const(const std::string& n, Type t, std::optional<Expr> init) {
    check_fresh(n);
    consts.emplace(n, std::move(t));
    const_order.push_back(n);
    if (init) const_inits.emplace(n, std::move(*init));
}

void TypeEnv::declare_fun(const std::string& n, FunSig sig) {
    check_fresh(n);
    funs.emplace(n, std::move(sig));
}

void TypeEnv::declare_event(const std::string& n, std::optional<Type> payload) {
    check_fresh(n);
    events.emplace(n, std::move(payload));
    event_order.push_back(n);
}

void TypeEnv::declare_type(const std::string& n, Type t) {
    check_fresh(n);
    if (t.kind() == TypeKind::Enum) {
        for (const std::string& c : t.constructors()) {
            if (known_name(c)) throw TypeError("enum constructor '" + c + "' clashes with an existing name");
        }
    }
    named_types.emplace(n, std::move(t));
}

std::optional<Type> TypeEnv::lookup_value(const std::string& n) const {
    if (auto it = vars.find(n); it != vars.end()) return it->second;
    if (auto it = consts.find(n); it != consts.end()) return it->second;
    return std::nullopt;
}

std::optional<Type> TypeEnv::lookup_ctor(const std::string& ctor) const {
    for (const auto& [name, t] : named_types) {
        if (t.kind() != TypeKind::Enum) continue;
        const auto& cs = t.constructors();
        if (std::find(cs.begin(), cs.end(), ctor) != cs.end()) return t;
    }
    return std::nullopt;
}

// -------------------------------------------------------------------------
// Type checking
// -------------------------------------------------------------------------

namespace {

[[noreturn]] void type_fail(const Expr& e, const std::string& msg) {
    throw TypeError(msg + " in '" + e.str() + "'");
}

Type check(const TypeEnv& env, const Expr& e, const std::optional<Type>& expected);

Type check_match(const TypeEnv& env, const Expr& e, const Type& want) {
    return check(env, e, std::optional<Type>(want));
}

// Equality operands: either side may be an unannotated <>; infer the typed
// side first and use it as the expectation for the other.
Type check_eq_operands(const TypeEnv& env, const Expr& e, const Expr& lhs, const Expr& rhs) {
    bool l_empty = lhs.kind() == ExprKind::EmptySeq;
    bool r_empty = rhs.kind() == ExprKind::EmptySeq;
    if (l_empty && r_empty) type_fail(e, "cannot determine element type of <> = <>");
    if (l_empty) {
        Type t = check(env, rhs, std::nullopt);
        check_match(env, lhs, t);
        return t;
    }
    Type t = check(env, lhs, std::nullopt);
    check_match(env, rhs, t);
    return t;
}

Type check(const TypeEnv& env, const Expr& e, const std::optional<Type>& expected) {
    const ExprNode& n = e.node();
    Type result;
    switch (n.kind) {
        case ExprKind::Var: {
            auto t = env.lookup_value(n.name);
            if (!t) type_fail(e, "unknown variable '" + n.name + "'");
            result = *t;
            break;
        }
        case ExprKind::IntLit: result = Type::integer(); break;
        case ExprKind::BoolLit: result = Type::boolean(); break;
        case ExprKind::EnumLit: {
            const auto& cs = n.type.constructors();
            if (std::find(cs.begin(), cs.end(), n.name) == cs.end())
                type_fail(e, "'" + n.name + "' is not a constructor of " + n.type.str());
            result = n.type;
            break;
        }
        case ExprKind::EmptySeq:
            if (!expected) type_fail(e, "ambiguous <> literal (no expected type)");
            if (expected->kind() != TypeKind::Seq)
                type_fail(e, "<> used where " + expected->str() + " is expected");
            result = *expected;
            break;
        case ExprKind::App: {
            auto it = env.funs.find(n.name);
            if (it == env.funs.end()) type_fail(e, "unknown function '" + n.name + "'");
            const FunSig& sig = it->second;
            if (sig.params.size() != n.kids.size())
                type_fail(e, "'" + n.name + "' expects " + std::to_string(sig.params.size()) +
                                 " argument(s), got " + std::to_string(n.kids.size()));
            for (std::size_t i = 0; i < n.kids.size(); ++i) check_match(env, n.kids[i], sig.params[i]);
            result = sig.result;
            break;
        }
        case ExprKind::Unary:
            check_match(env, n.kids[0], Type::boolean());
            result = Type::boolean();
            break;
        case ExprKind::Binary:
            switch (n.bin) {
                case BinOp::And:
                case BinOp::Or:
                case BinOp::Implies:
                    check_match(env, n.kids[0], Type::boolean());
                    check_match(env, n.kids[1], Type::boolean());
                    result = Type::boolean();
                    break;
                case BinOp::Eq:
                case BinOp::Neq:
                    check_eq_operands(env, e, n.kids[0], n.kids[1]);
                    result = Type::boolean();
                    break;
                case BinOp::Lt:
                case BinOp::Le:
                    check_match(env, n.kids[0], Type::integer());
                    check_match(env, n.kids[1], Type::integer());
                    result = Type::boolean();
                    break;
                case BinOp::Add:
                case BinOp::Sub:
                case BinOp::Mul:
                    check_match(env, n.kids[0], Type::integer());
                    check_match(env, n.kids[1], Type::integer());
                    result = Type::integer();
                    break;
            }
            break;
        case ExprKind::Forall: {
            TypeEnv inner = env;
            inner.vars[n.name] = n.type;  // binder shadows any outer meaning
            check(inner, n.kids[0], Type::boolean());
            result = Type::boolean();
            break;
        }
    }
    if (expected && result != *expected)
        type_fail(e, "expected " + expected->str() + ", found " + result.str());
    return result;
}

}  // namespace

Type type_check(const TypeEnv& env, const Expr& e, const std::optional<Type>& expected) {
    return check(env, e, expected);
}

// -------------------------------------------------------------------------
// Substitution
// -------------------------------------------------------------------------

std::string Subst::str() const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& [k, v] : entries) {
        if (!first) os << ", ";
        first = false;
        os << k << " -> " << v.str();
    }
    os << '}';
    return os.str();
}

namespace {

Expr rename_free(const Expr& e, const std::string& from, const std::string& to) {
    Subst r;
    r.entries.emplace(from, Expr::var(to));
    return subst_apply(r, e);
}

}  // namespace

Expr subst_apply(const Subst& s, const Expr& e) {
    if (s.is_identity()) return e;
    const ExprNode& n = e.node();
    switch (n.kind) {
        case ExprKind::Var: {
            auto it = s.entries.find(n.name);
            return it == s.entries.end() ? e : it->second;
        }
        case ExprKind::IntLit:
        case ExprKind::BoolLit:
        case ExprKind::EnumLit:
        case ExprKind::EmptySeq:
            return e;
        case ExprKind::App: {
            std::vector<Expr> kids;
            kids.reserve(n.kids.size());
            for (const Expr& k : n.kids) kids.push_back(subst_apply(s, k));
            return Expr::app(n.name, std::move(kids));
        }
        case ExprKind::Unary: return Expr::un(n.un, subst_apply(s, n.kids[0]));
        case ExprKind::Binary:
            return Expr::bin(n.bin, subst_apply(s, n.kids[0]), subst_apply(s, n.kids[1]));
        case ExprKind::Forall: {
            Subst inner = s;
            inner.entries.erase(n.name);
            if (inner.is_identity()) return e;
            // Rename the binder if a replacement would capture it.
            bool captures = false;
            for (const auto& [k, v] : inner.entries) {
                (void)k;
                if (v.mentions(n.name)) {
                    captures = true;
                    break;
                }
            }
            std::string binder = n.name;
            Expr body = n.kids[0];
            if (captures) {
                int i = 0;
                std::string fresh;
                do {
                    fresh = n.name + "_" + std::to_string(i++);
                } while ([&] {
                    if (inner.entries.count(fresh)) return true;
                    for (const auto& [k, v] : inner.entries) {
                        (void)k;
                        if (v.mentions(fresh)) return true;
                    }
                    return body.mentions(fresh);
                }());
                body = rename_free(body, binder, fresh);
                binder = fresh;
            }
            return Expr::forall(binder, n.type, subst_apply(inner, body));
        }
    }
    return e;
}

Subst subst_compose(const Subst& rho, const Subst& sigma) {
    Subst out = sigma;
    for (const auto& [v, rhs] : rho.entries) out.entries[v] = constant_fold(subst_apply(sigma, rhs));
    return out;
}

// -------------------------------------------------------------------------
// Constant folding
// -------------------------------------------------------------------------

namespace {

bool ground_eq(const ExprNode& a, const ExprNode& b, bool& out) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprKind::IntLit: out = a.int_val == b.int_val; return true;
        case ExprKind::BoolLit: out = a.bool_val == b.bool_val; return true;
        case ExprKind::EnumLit: out = a.name == b.name; return true;
        case ExprKind::EmptySeq: out = true; return true;
        default: return false;
    }
}

bool is_int(const Expr& e, std::int64_t& v) {
    if (e.kind() != ExprKind::IntLit) return false;
    v = e.node().int_val;
    return true;
}

}  // namespace

Expr constant_fold(const Expr& e) {
    const ExprNode& n = e.node();
    switch (n.kind) {
        case ExprKind::Var:
        case ExprKind::IntLit:
        case ExprKind::BoolLit:
        case ExprKind::EnumLit:
        case ExprKind::EmptySeq:
            return e;
        case ExprKind::App: {
            std::vector<Expr> kids;
            kids.reserve(n.kids.size());
            bool changed = false;
            for (const Expr& k : n.kids) {
                kids.push_back(constant_fold(k));
                changed = changed || kids.back() != k;
            }
            return changed ? Expr::app(n.name, std::move(kids)) : e;
        }
        case ExprKind::Unary: {
            Expr k = constant_fold(n.kids[0]);
            if (k.kind() == ExprKind::BoolLit) return Expr::bool_lit(!k.node().bool_val);
            if (k.kind() == ExprKind::Unary) return k.node().kids[0];  // not not x
            return k == n.kids[0] ? e : Expr::un(UnOp::Not, k);
        }
        case ExprKind::Forall: {
            Expr body = constant_fold(n.kids[0]);
            if (body.kind() == ExprKind::BoolLit) return body;  // types are nonempty
            return body == n.kids[0] ? e : Expr::forall(n.name, n.type, body);
        }
        case ExprKind::Binary: {
            Expr l = constant_fold(n.kids[0]);
            Expr r = constant_fold(n.kids[1]);
            std::int64_t a = 0, b = 0;
            switch (n.bin) {
                case BinOp::And:
                    if (is_true(l)) return r;
                    if (is_true(r)) return l;
                    if (is_false(l) || is_false(r)) return Expr::bool_lit(false);
                    break;
                case BinOp::Or:
                    if (is_false(l)) return r;
                    if (is_false(r)) return l;
                    if (is_true(l) || is_true(r)) return Expr::bool_lit(true);
                    break;
                case BinOp::Implies:
                    if (is_true(l)) return r;
                    if (is_false(l) || is_true(r)) return Expr::bool_lit(true);
                    if (is_false(r)) return constant_fold(Expr::un(UnOp::Not, l));
                    break;
                case BinOp::Eq: {
                    bool v;
                    if (ground_eq(l.node(), r.node(), v)) return Expr::bool_lit(v);
                    if (l == r) return Expr::bool_lit(true);
                    break;
                }
                case BinOp::Neq: {
                    bool v;
                    if (ground_eq(l.node(), r.node(), v)) return Expr::bool_lit(!v);
                    if (l == r) return Expr::bool_lit(false);
                    break;
                }
                case BinOp::Lt:
                    if (is_int(l, a) && is_int(r, b)) return Expr::bool_lit(a < b);
                    break;
                case BinOp::Le:
                    if (is_int(l, a) && is_int(r, b)) return Expr::bool_lit(a <= b);
                    break;
                case BinOp::Add:
                    if (is_int(l, a) && is_int(r, b)) return Expr::int_lit(a + b);
                    if (is_int(l, a) && a == 0) return r;
                    if (is_int(r, b) && b == 0) return l;
                    break;
                case BinOp::Sub:
                    if (is_int(l, a) && is_int(r, b)) return Expr::int_lit(a - b);
                    if (is_int(r, b) && b == 0) return l;
                    break;
                case BinOp::Mul:
                    if (is_int(l, a) && is_int(r, b)) return Expr::int_lit(a * b);
                    if ((is_int(l, a) && a == 0) || (is_int(r, b) && b == 0)) return Expr::int_lit(0);
                    if (is_int(l, a) && a == 1) return r;
                    if (is_int(r, b) && b == 1) return l;
                    break;
            }
            return (l == n.kids[0] && r == n.kids[1]) ? e : Expr::bin(n.bin, l, r);
        }
    }
    return e;
}

}  // namespace rcv
