#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcv {

// -------------------------------------------------------------------------
// Types
// -------------------------------------------------------------------------

enum class TypeKind { Bool, Int, Enum, Seq, Abstract };

class Type {
public:
    Type() = default;

    static Type boolean();
    static Type integer();
    static Type enumeration(std::string name, std::vector<std::string> ctors);
    static Type seq(Type elem);
    static Type abstract(std::string name);

    bool valid() const { return node_ != nullptr; }
    TypeKind kind() const;
    const std::string& name() const;                    // Enum / Abstract
    const std::vector<std::string>& constructors() const;  // Enum
    Type elem() const;                                  // Seq

    bool operator==(const Type& o) const;
    bool operator!=(const Type& o) const { return !(*this == o); }

    std::string str() const;

private:
    struct Node {
        TypeKind kind;
        std::string name;
        std::vector<std::string> ctors;
        std::shared_ptr<const Node> elem;
    };
    explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// -------------------------------------------------------------------------
// Expressions
// -------------------------------------------------------------------------

enum class ExprKind { Var, IntLit, BoolLit, EnumLit, EmptySeq, App, Unary, Binary, Forall };
enum class UnOp { Not };
enum class BinOp { And, Or, Implies, Eq, Neq, Lt, Le, Add, Sub, Mul };

class Expr;
struct ExprNode {
    ExprKind kind;
    std::string name;          // Var name, App function, EnumLit constructor, Forall binder
    std::int64_t int_val = 0;
    bool bool_val = false;
    Type type;                 // EnumLit enum type, Forall binder type
    UnOp un{};
    BinOp bin{};
    std::vector<Expr> kids;    // App args, operand(s), Forall body
};

class Expr {
public:
    Expr() = default;

    static Expr var(std::string name);
    static Expr int_lit(std::int64_t v);
    static Expr bool_lit(bool v);
    static Expr enum_lit(Type enum_type, std::string ctor);
    static Expr empty_seq();
    static Expr app(std::string fn, std::vector<Expr> args);
    static Expr un(UnOp op, Expr e);
    static Expr bin(BinOp op, Expr lhs, Expr rhs);
    static Expr forall(std::string binder, Type t, Expr body);

    bool valid() const { return node_ != nullptr; }
    const ExprNode& node() const { return *node_; }
    ExprKind kind() const { return node_->kind; }

    bool operator==(const Expr& o) const;
    bool operator!=(const Expr& o) const { return !(*this == o); }

    std::string str() const;

    // Free variables in first-occurrence order (function symbols excluded).
    std::vector<std::string> free_vars() const;
    bool mentions(const std::string& name) const;

private:
    explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
    static Expr mk(ExprNode n);
    std::shared_ptr<const ExprNode> node_;
};

bool is_true(const Expr& e);
bool is_false(const Expr& e);

// Convenience builders for formulas assembled in code.
Expr operator&&(const Expr& a, const Expr& b);
Expr operator||(const Expr& a, const Expr& b);
Expr operator!(const Expr& a);
Expr implies(const Expr& a, const Expr& b);
Expr eq(const Expr& a, const Expr& b);

// Right-nested disjunction/conjunction; false resp. true for the empty list.
Expr or_of(const std::vector<Expr>& es);
Expr and_of(const std::vector<Expr>& es);

// -------------------------------------------------------------------------
// Environments
// -------------------------------------------------------------------------

struct FunSig {
    std::vector<Type> params;
    Type result;

    bool operator==(const FunSig& o) const = default;
};

struct TypeError : std::runtime_error {
    explicit TypeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct TypeEnv {
    std::map<std::string, Type> vars;
    std::map<std::string, Type> consts;
    std::map<std::string, Expr> const_inits;              // optional literal initializers
    std::map<std::string, FunSig> funs;
    std::map<std::string, std::optional<Type>> events;    // payload type, if any
    std::map<std::string, Type> named_types;              // declared enum / abstract types

    // Declaration order, needed wherever output must be reproducible.
    std::vector<std::string> var_order;
    std::vector<std::string> const_order;
    std::vector<std::string> event_order;

    void declare_var(const std::string& n, Type t);
    void declare_const(const std::string& n, Type t, std::optional<Expr> init = {});
    void declare_fun(const std::string& n, FunSig sig);
    void declare_event(const std::string& n, std::optional<Type> payload);
    void declare_type(const std::string& n, Type t);

    std::optional<Type> lookup_value(const std::string& n) const;  // vars, then consts
    // Enum type owning the constructor, if any.
    std::optional<Type> lookup_ctor(const std::string& ctor) const;
    bool known_name(const std::string& n) const;

    bool operator==(const TypeEnv& o) const = default;

private:
    void check_fresh(const std::string& n) const;
};

// Type-checks e, returning its type. `expected` disambiguates <> literals and
// is enforced when present.
Type type_check(const TypeEnv& env, const Expr& e, const std::optional<Type>& expected = {});

// -------------------------------------------------------------------------
// Substitutions
// -------------------------------------------------------------------------

struct Subst {
    std::map<std::string, Expr> entries;

    Subst() = default;
    Subst(std::initializer_list<std::pair<const std::string, Expr>> init) : entries(init) {}

    bool is_identity() const { return entries.empty(); }
    bool operator==(const Subst& o) const { return entries == o.entries; }
    bool operator!=(const Subst& o) const { return !(*this == o); }
    std::string str() const;
};

// Capture-avoiding application; Forall binders shadow entries.
Expr subst_apply(const Subst& s, const Expr& e);

// Composition: apply sigma first, then rho. Entries of rho are rewritten by
// sigma and folded; entries of sigma not overridden are kept.
Subst subst_compose(const Subst& rho, const Subst& sigma);

// Bottom-up evaluation of ground subterms plus identity laws
// (x and true = x, e = e -> true, ...). Idempotent.
Expr constant_fold(const Expr& e);

}  // namespace rcv
