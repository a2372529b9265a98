#pragma once

#include <map>
#include <string>

#include "rcv/rprog.hpp"
#include "rcv/wellformed.hpp"

namespace rcv {

// Machine compiled to one reactive program:
//   actv := <init> ; do (actv = N -> body_N | ...) od
// with one branch per non-final node in declaration order. State variables
// inside node bodies carry the "r:" frame prefix; actv and constants do not.
struct CompiledMachine {
    std::string name;
    TypeEnv env;        // machine env with vars renamed to r:*, plus actv and eps
    TypeEnv base_env;   // environment as declared
    Type actv_type;     // enum over all node names, declaration order
    MachineViews mviews;
    std::map<std::string, RProg> per_node;  // bodies of non-final nodes
    RProg program;
};

// Direct action denotation. No framing, no control variable.
RProg act_sem(const Action& a);

// One transition: guard, then trigger (eps when absent), source exit action
// and transition action, then the control update. Everything but the control
// update is frame-extended over env.
RProg trans_sem(const TypeEnv& env, const Type& actv_type, const Action& src_exit,
                const TransDecl& t);

// One node: frame-extended entry action, then the external choice over its
// outgoing transitions (Stop when there are none).
RProg node_sem(const TypeEnv& env, const Type& actv_type, const MachineViews& v,
               const NodeDecl& n);

// Whole machine. Requires well-formedness; throws WfError otherwise.
CompiledMachine machine_sem(const StMach& m);

}  // namespace rcv
