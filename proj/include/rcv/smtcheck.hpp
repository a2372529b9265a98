#pragma once

#include <string>
#include <vector>

namespace rcv {

// Structural validation of an exported SMT-LIB 2 script without a solver:
// balanced s-expressions, a sane command sequence (set-logic first, one
// check-sat last, at least one assert), and every sort and term symbol
// declared before use with matching arity and argument sorts. Catches the
// classic export bugs: undeclared symbols, missing sort declarations,
// arity drift between declaration and application.

struct SmtDiag {
    int line = 0;
    std::string message;
};

struct SmtCheckResult {
    std::vector<SmtDiag> diags;
    int commands = 0;
    int asserts = 0;

    bool ok() const { return diags.empty(); }
    std::string str() const;
};

SmtCheckResult smt_check(const std::string& script);

}  // namespace rcv
