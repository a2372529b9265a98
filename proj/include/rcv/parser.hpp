#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "rcv/machine.hpp"

namespace rcv {

struct ParseError : std::runtime_error {
    int line;
    int col;
    ParseError(int line_, int col_, const std::string& msg)
        : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                             std::to_string(col_) + ": " + msg),
          line(line_),
          col(col_) {}
};

// Parses one machine file (type/function/constant preamble plus one
// statemachine block) and type-checks it. Throws ParseError or TypeError.
// Well-formedness of the graph structure is not checked here.
StMach parse(std::string_view text);

// Parses a standalone boolean expression against an existing environment.
// Used for invariants supplied on the command line.
Expr parse_expr(const TypeEnv& env, std::string_view text);

}  // namespace rcv
