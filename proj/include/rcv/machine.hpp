#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rcv/ast.hpp"

namespace rcv {

// -------------------------------------------------------------------------
// Event references: e, e?x, e!v
// -------------------------------------------------------------------------

enum class EventKind { Simple, Input, Output };

struct EventRef {
    EventKind kind = EventKind::Simple;
    std::string chan;
    std::string var;           // Input target
    Expr value;                // Output expression

    static EventRef simple(std::string chan);
    static EventRef input(std::string chan, std::string var);
    static EventRef output(std::string chan, Expr value);

    bool operator==(const EventRef& o) const;
    bool operator!=(const EventRef& o) const { return !(*this == o); }
    std::string str() const;
};

// -------------------------------------------------------------------------
// Actions
// -------------------------------------------------------------------------

enum class ActKind { Skip, Assign, Event, Seq, If };

class Action;
struct ActionNode {
    ActKind kind = ActKind::Skip;
    std::string var;                 // Assign target
    Expr rhs;                        // Assign value
    std::optional<EventRef> event;   // Event
    Expr cond;                       // If
    std::vector<Action> kids;        // Seq (2), If (then, else)
};

class Action {
public:
    Action();  // skip

    static Action skip();
    static Action assign(std::string var, Expr rhs);
    static Action event(EventRef e);
    static Action seq(Action a, Action b);
    static Action cond(Expr b, Action then_branch, Action else_branch);

    const ActionNode& node() const { return *node_; }
    ActKind kind() const { return node_->kind; }
    bool is_skip() const { return node_->kind == ActKind::Skip; }

    bool operator==(const Action& o) const;
    bool operator!=(const Action& o) const { return !(*this == o); }
    std::string str() const;

private:
    explicit Action(std::shared_ptr<const ActionNode> n) : node_(std::move(n)) {}
    static Action mk(ActionNode n);
    std::shared_ptr<const ActionNode> node_;
};

// -------------------------------------------------------------------------
// Machine declarations
// -------------------------------------------------------------------------

struct NodeDecl {
    std::string name;
    Action entry;  // defaults to skip
    Action exit;   // defaults to skip

    bool operator==(const NodeDecl& o) const;
    bool operator!=(const NodeDecl& o) const { return !(*this == o); }
};

struct TransDecl {
    std::string id;
    std::string src;
    std::string tgt;
    std::optional<EventRef> trigger;
    Expr cond = Expr::bool_lit(true);
    Action act;   // defaults to skip

    bool operator==(const TransDecl& o) const;
    bool operator!=(const TransDecl& o) const { return !(*this == o); }
};

struct StMach {
    std::string name;
    TypeEnv env;
    std::vector<NodeDecl> nodes;   // declaration order
    std::string init;
    std::vector<std::string> finals;
    std::vector<TransDecl> transitions;

    bool operator==(const StMach& o) const;
    bool operator!=(const StMach& o) const { return !(*this == o); }
};

// Renders a machine back to the concrete syntax, parseable by parse().
std::string pretty_print(const StMach& m);

// Type-checks every expression and action of the machine against its
// environment. Throws TypeError. Called by parse(); exposed for machines
// assembled programmatically.
void type_check_machine(const StMach& m);

}  // namespace rcv
