#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rcv/rprog.hpp"

namespace rcv {

// One rewrite step. Every id corresponds to one algebraic identity; the
// engine records which fired where, so a simplification is replayable as a
// chain of law applications.
enum class RuleId {
    MIRACLE_LEFT_ANNIHIL,   // Miracle ; P  =  Miracle
    SKIP_UNIT_LEFT,         // Skip ; P  =  P
    SKIP_UNIT_RIGHT,        // P ; Skip  =  P
    SEQ_ASSOC,              // (P ; Q) ; R  =  P ; (Q ; R)
    GUARD_TRUE,             // true |> P  =  P
    GUARD_FALSE,            // false |> P  =  Stop
    COND_TRUE,              // P <| true |> Q  =  P
    COND_FALSE,             // P <| false |> Q  =  Q
    ALT_EMPTY,              // if fi  =  Chaos
    ALT_SINGLE,             // if b -> P fi  =  P <| b |> Chaos
    ALT_COVERED,            // [b1 or ... or bn] ; if ... fi  =  |~| of guarded commands
    ASSIGN_COMPOSE,         // <s> ; <r>  =  <r after s>
    ASSIGN_PUSH_EVENT,      // <s> ; e  =  e ; <s>
    ASSIGN_PUSH_OUT,        // <s> ; e!v  =  e!(s v) ; <s>
    ASSIGN_PUSH_GUARD,      // <s> ; (b |> P)  =  (s b) |> (<s> ; P)
    ASSIGN_PUSH_ASSUME,     // <s> ; [b]  =  [s b] ; <s>
    ASSIGN_PUSH_COND,       // <s> ; (P <| b |> Q)  =  (<s> ; P) <| s b |> (<s> ; Q)
    ASSIGN_PUSH_EXTCHOICE,  // <s> ; (P [] Q)  =  (<s> ; P) [] (<s> ; Q)
    ASSIGN_PUSH_NDCHOICE,   // likewise through |~|
    ASSIGN_PUSH_ALT,        // <s> ; if g -> P | ... fi  =  if s g -> <s> ; P | ... fi
    ASSIGN_PUSH_STOP,       // <s> ; Stop  =  Stop
    ASSIGN_PUSH_CHAOS,      // <s> ; Chaos  =  Chaos
    ASSIGN_PUSH_MIRACLE,    // <s> ; Miracle  =  Miracle
    EXTCHOICE_LEFT_DIST,    // (P [] Q) ; R  =  (P ; R) [] (Q ; R), branches initially communicating
    CONST_FOLD,             // expression-level constant folding
};

const char* rule_name(RuleId id);

struct RuleApp {
    RuleId rule;
    std::vector<int> path;  // child ordinals from the root (branch bodies count as children)

    bool operator==(const RuleApp& o) const { return rule == o.rule && path == o.path; }
};

struct RewriteResult {
    RProg program;
    std::vector<RuleApp> trace;
};

struct InternalError : std::runtime_error {
    explicit InternalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Exhaustive leftmost-outermost rewriting with the rule set above. Does not
// rewrite inside iteration bodies (those are normalized per node instead).
// Throws InternalError if the step budget is exhausted, which would indicate
// a non-terminating rule pair.
RewriteResult simplify(const RProg& p);

// Pushes an update through a whole program in one pass: assignments compose,
// conditions are rewritten, outputs capture the updated value, and the update
// materializes again in front of inputs and iterations, after events, and at
// Skip. Stop, Chaos and Miracle absorb it.
RProg apply_subst(const Subst& s, const RProg& p);

// -------------------------------------------------------------------------
// Node normal form
// -------------------------------------------------------------------------

struct NormalizeError : std::runtime_error {
    explicit NormalizeError(const std::string& msg) : std::runtime_error(msg) {}
};

// One way through the entry action: reachable under cond, accumulating the
// state update.
struct NormPath {
    Expr cond;
    Subst update;
};

// One outgoing alternative: raw transition guard, optional trigger event and
// the post-trigger remainder.
struct NormAlt {
    Expr guard;
    std::optional<RProg> trigger;
    RProg post;
};

struct NodeNormalForm {
    std::vector<NormPath> paths;
    std::vector<NormAlt> alts;
    // Entry inputs havoc their target: the pre-input value is renamed to a
    // fresh symbol. Maps fresh name -> original variable.
    std::map<std::string, std::string> havocs;

    // fold(update(guard of alt i)) under the given path.
    Expr guard_under(const NormPath& p, std::size_t alt) const;
    // fold(cond implies update(disjunction of all guards)); false for a node
    // with no alternatives.
    Expr coverage(const NormPath& p) const;
};

// Decomposes a compiled node body (entry prefix of assignments, conditionals
// and events, then guarded alternatives each ending in the control update).
// The frame prefix is stripped first. Throws NormalizeError on bodies outside
// this shape, e.g. an entry that communicates after a guard would already be
// reachable.
NodeNormalForm normalize_node(const RProg& body);

}  // namespace rcv
