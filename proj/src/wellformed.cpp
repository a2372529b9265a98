#include "rcv/wellformed.hpp"

#include <algorithm>
#include <sstream>

namespace rcv {

namespace {

std::string join_violations(const WfReport& r) {
    std::ostringstream os;
    os << "machine is not well-formed:";
    for (const auto& v : r.violations) os << "\n  [" << v.constraint << "] " << v.message;
    return os.str();
}

}  // namespace

WfError::WfError(WfReport r) : std::runtime_error(join_violations(r)), report(std::move(r)) {}

WfReport check_wf(const StMach& m) {
    WfReport r;
    std::set<std::string> names;
    std::set<std::string> dups;
    for (const NodeDecl& n : m.nodes) {
        if (!names.insert(n.name).second && dups.insert(n.name).second)
            r.violations.push_back({1, n.name, "duplicate state name '" + n.name + "'"});
    }
    std::set<std::string> finals(m.finals.begin(), m.finals.end());

    if (!names.count(m.init))
        r.violations.push_back({2, m.init, "initial state '" + m.init + "' is not declared"});
    if (finals.count(m.init))
        r.violations.push_back({3, m.init, "initial state '" + m.init + "' is final"});
    for (const TransDecl& t : m.transitions) {
        if (!names.count(t.src)) {
            r.violations.push_back(
                {4, t.id, "transition '" + t.id + "' leaves undeclared state '" + t.src + "'"});
        } else if (finals.count(t.src)) {
            r.violations.push_back(
                {4, t.id, "transition '" + t.id + "' leaves final state '" + t.src + "'"});
        }
        if (!names.count(t.tgt))
            r.violations.push_back(
                {5, t.id, "transition '" + t.id + "' targets undeclared state '" + t.tgt + "'"});
    }

    // Warnings are advisory only; they do not affect well-formedness. A final
    // name that is never declared is inert (no node carries it), so it is a
    // warning rather than a violation.
    for (const std::string& f : m.finals) {
        if (!names.count(f))
            r.warnings.push_back({"undeclared-final", f, "final name '" + f + "' is not a declared state"});
    }
    if (r.ok()) {
        std::set<std::string> reachable{m.init};
        bool grew = true;
        while (grew) {
            grew = false;
            for (const TransDecl& t : m.transitions) {
                if (reachable.count(t.src) && reachable.insert(t.tgt).second) grew = true;
            }
        }
        for (const NodeDecl& n : m.nodes) {
            if (!reachable.count(n.name))
                r.warnings.push_back({"unreachable-node", n.name,
                                      "state '" + n.name + "' is unreachable from the initial state"});
            bool is_final = finals.count(n.name) > 0;
            bool has_out = std::any_of(m.transitions.begin(), m.transitions.end(),
                                       [&](const TransDecl& t) { return t.src == n.name; });
            if (!is_final && !has_out)
                r.warnings.push_back({"no-outgoing", n.name,
                                      "non-final state '" + n.name + "' has no outgoing transition"});
        }
    }
    return r;
}

MachineViews views(const StMach& m) {
    WfReport r = check_wf(m);
    if (!r.ok()) throw WfError(std::move(r));

    MachineViews v;
    std::set<std::string> finals(m.finals.begin(), m.finals.end());
    for (const NodeDecl& n : m.nodes) {
        v.nnames.insert(n.name);
        v.nmap.emplace(n.name, n);
        v.tmap.emplace(n.name, std::vector<TransDecl>{});
        if (finals.count(n.name)) {
            v.fnames.insert(n.name);
        } else {
            v.inters.push_back(n);
        }
        if (n.name == m.init) v.ninit = n;
    }
    for (const TransDecl& t : m.transitions) v.tmap[t.src].push_back(t);
    return v;
}

}  // namespace rcv
