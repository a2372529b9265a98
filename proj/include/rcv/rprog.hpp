#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rcv/ast.hpp"

namespace rcv {

// Reactive programs. Guarded commands, alternation and guarded iteration are
// first-class nodes; their characterizing equations live in the rewriter and
// are cross-checked against the explicit-state oracle.

enum class RKind {
    Miracle, Chaos, Skip, Stop,
    Assign,          // simultaneous update <x := e, ...>
    DoSimple,        // event e
    DoOut,           // event e!v
    DoIn,            // event e?x
    Guard,           // b |> P   (Stop when b is false)
    Seq,
    Cond,            // P <| b |> Q
    ExtChoice,
    NDChoice,
    Assume,          // [b]  (gcmd of Skip)
    Alternation,     // if g1 -> P1 | ... fi
    DoIter           // do g1 -> P1 | ... od
};

struct RNode;

class RProg {
public:
    RProg() = default;

    bool valid() const { return node_ != nullptr; }
    const RNode& node() const { return *node_; }
    RKind kind() const;

    bool operator==(const RProg& o) const;
    bool operator!=(const RProg& o) const { return !(*this == o); }

    static RProg wrap(std::shared_ptr<const RNode> n) { return RProg(std::move(n)); }

private:
    explicit RProg(std::shared_ptr<const RNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const RNode> node_;
};

struct Branch {
    Expr guard;
    RProg body;

    bool operator==(const Branch& o) const { return guard == o.guard && body == o.body; }
};

struct RNode {
    RKind kind = RKind::Skip;
    Subst subst;                  // Assign
    std::string chan;             // Do*
    std::string var;              // DoIn
    Expr cond;                    // DoOut value, Guard/Cond/Assume condition
    std::vector<RProg> kids;      // Seq(2), Cond(then, else), choices
    std::vector<Branch> branches; // Alternation, DoIter
};

// Plain node factories.
RProg miracle();
RProg chaos();
RProg skipr();
RProg stopr();
RProg assignr(Subst s);
RProg do_simple(std::string chan);
RProg do_out(std::string chan, Expr value);
RProg do_in(std::string chan, std::string var);
RProg guardr(Expr b, RProg p);
RProg seqr(RProg p, RProg q);
RProg condr(RProg p, Expr b, RProg q);
RProg ext_choice(std::vector<RProg> ps);
RProg nd_choice(std::vector<RProg> ps);
RProg assumer(Expr b);
RProg alternation_node(std::vector<Branch> bs);

// Smart constructors.
// gcmd(b, P) is P <| b |> Miracle, collapsing gcmd(b, Skip) to the assumption [b].
RProg gcmd(Expr b, RProg p);
// alternation([]) is Chaos; otherwise an Alternation node (branch order kept).
RProg alternation(std::vector<Branch> bs);
// Guarded iteration. Every branch body must communicate before it can
// terminate; throws std::invalid_argument otherwise.
RProg do_iter(std::vector<Branch> bs);
// Iteration node without the productivity check, for rebuilding nodes whose
// branches are already known productive.
RProg do_iter_raw(std::vector<Branch> bs);

// True when P performs at least one event on every path that reaches
// termination. Conservative and syntactic.
bool communicates_before_term(const RProg& p);

// Convenience: right-nested sequence of parts, Skip for the empty list.
RProg seq_of(std::vector<RProg> parts);

// State-variable qualification. Prefixes every occurrence of a state variable
// of env (assignment targets, input targets, reads in expressions) with "r:".
// Constants, events and function symbols are untouched. Throws TypeError if p
// mentions the control variable actv, which is outside every frame.
RProg frame_extend(const RProg& p, const TypeEnv& env);
Expr frame_extend_expr(const Expr& e, const TypeEnv& env);

// Inverse of frame_extend's renaming: strips the "r:" prefix wherever present.
RProg unqualify(const RProg& p);
Expr unqualify_expr(const Expr& e);

extern const char* const kFramePrefix;  // "r:"
extern const char* const kActv;
extern const char* const kEps;

// Single-line rendering.
std::string to_text(const RProg& p);
// Multi-line rendering: sequence steps and iteration branches on own lines.
std::string to_text_pretty(const RProg& p);
// Compact canonical form, usable as a hash/dedup key.
std::string to_key(const RProg& p);

}  // namespace rcv
