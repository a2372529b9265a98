#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rcv/rewrite.hpp"
#include "rcv/semantics.hpp"

namespace rcv {

enum class PropertyKind { DeadlockFreedom, StateInvariant };

struct Property {
    PropertyKind kind = PropertyKind::DeadlockFreedom;
    Expr invariant;  // StateInvariant only, over the declared state variables

    static Property deadlock_freedom();
    static Property state_invariant(Expr inv);
};

struct Binder {
    std::string name;
    Type type;
};

// One proof obligation: body is quantifier free, binders are the universally
// quantified input payloads and havoc ghosts, free variables range over their
// whole type and function symbols are uninterpreted.
struct Obligation {
    std::string id;       // "init" or the node name
    std::string node;     // empty for the init obligation
    std::string origin;   // one line description
    std::vector<Binder> binders;
    Expr body;
};

// DeadlockFreedom: one obligation for the initialisation and one per
// non-final node (every reachable entry path must enable some transition
// guard). StateInvariant: the invariant at machine start plus, per node,
// preservation across each outgoing transition into the next arrival.
std::vector<Obligation> gen_obligations(const CompiledMachine& m, const Property& p);

struct Decision {
    enum class Verdict { Valid, Invalid, Unknown };
    Verdict verdict = Verdict::Unknown;
    // folding | boolean-abstraction | enum-enumeration | equality-enumeration
    // | smt-residual
    std::string procedure;
    std::string witness;  // Invalid: falsifying assignment, atom terms by name
};

// Layered validity check: constant folding, then abstraction of function
// applications to typed unknowns, then exhaustive enumeration over the
// bounded dimensions where that is complete (booleans, enumerations, and
// pure equality atoms over integers, sequences and abstract values).
// Anything outside these fragments is Unknown and left to an external
// solver via emit_smt.
Decision decide(const TypeEnv& env, const Obligation& ob);

// SMT-LIB 2 script asserting the negated obligation, binders skolemized.
// The obligation is valid iff the script is unsatisfiable.
std::string emit_smt(const TypeEnv& env, const Obligation& ob, const std::string& title);

struct ObligationResult {
    Obligation obligation;
    Decision decision;
    std::string smt;  // Unknown only
};

struct Report {
    enum class Outcome { Verified, Refuted, Residual };
    std::string machine;
    PropertyKind property = PropertyKind::DeadlockFreedom;
    std::string property_text;
    std::vector<ObligationResult> obligations;
    Outcome outcome = Outcome::Verified;
};

Report verify(const CompiledMachine& m, const Property& p);

std::string report_text(const Report& r);

}  // namespace rcv
