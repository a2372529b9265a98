#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "rcv/machine.hpp"

namespace rcv {

// The five structural constraints a machine must satisfy:
//   1 node names are pairwise distinct
//   2 the initial node is declared
//   3 the initial node is not final
//   4 every transition leaves a declared, non-final node
//   5 every transition targets a declared node
struct WfViolation {
    int constraint;       // 1..5
    std::string subject;  // offending node name or transition id
    std::string message;
};

struct WfWarning {
    std::string code;  // "unreachable-node", "no-outgoing"
    std::string subject;
    std::string message;
};

struct WfReport {
    std::vector<WfViolation> violations;
    std::vector<WfWarning> warnings;
    bool ok() const { return violations.empty(); }
};

WfReport check_wf(const StMach& m);

struct WfError : std::runtime_error {
    WfReport report;
    explicit WfError(WfReport r);
};

// Views over a well-formed machine. Throws WfError otherwise.
struct MachineViews {
    std::set<std::string> nnames;
    std::set<std::string> fnames;
    std::map<std::string, NodeDecl> nmap;
    std::map<std::string, std::vector<TransDecl>> tmap;  // per source, declaration order
    NodeDecl ninit;
    std::vector<NodeDecl> inters;  // non-final nodes, declaration order
};

MachineViews views(const StMach& m);

}  // namespace rcv
