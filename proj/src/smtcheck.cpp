#include "rcv/smtcheck.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>

namespace rcv {

namespace {

struct SExpr {
    bool atom = true;
    std::string text;          // atoms: symbol / numeral (quoting pipes stripped)
    std::vector<SExpr> kids;   // lists
    int line = 1;
};

struct Lexer {
    const std::string& src;
    std::size_t pos = 0;
    int line = 1;
    std::vector<SmtDiag>& diags;

    void skip() {
        while (pos < src.size()) {
            char c = src[pos];
            if (c == '\n') { ++line; ++pos; }
            else if (std::isspace(static_cast<unsigned char>(c))) ++pos;
            else if (c == ';') { while (pos < src.size() && src[pos] != '\n') ++pos; }
            else break;
        }
    }

    // nullopt at end of input; "(" and ")" come through as one-char atoms
    std::optional<SExpr> token() {
        skip();
        if (pos >= src.size()) return std::nullopt;
        SExpr t;
        t.line = line;
        char c = src[pos];
        if (c == '(' || c == ')') {
            ++pos;
            t.text = std::string(1, c);
            return t;
        }
        if (c == '|') {
            ++pos;
            while (pos < src.size() && src[pos] != '|') {
                if (src[pos] == '\n') ++line;
                t.text += src[pos++];
            }
            if (pos >= src.size()) diags.push_back({t.line, "unterminated quoted symbol"});
            else ++pos;
            return t;
        }
        if (c == '"') {
            ++pos;
            while (pos < src.size()) {
                if (src[pos] == '"' && pos + 1 < src.size() && src[pos + 1] == '"') {
                    t.text += '"';
                    pos += 2;
                } else if (src[pos] == '"') {
                    ++pos;
                    return t;
                } else {
                    if (src[pos] == '\n') ++line;
                    t.text += src[pos++];
                }
            }
            diags.push_back({t.line, "unterminated string literal"});
            return t;
        }
        while (pos < src.size()) {
            char d = src[pos];
            if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' ||
                d == ';' || d == '|' || d == '"')
                break;
            t.text += d;
            ++pos;
        }
        return t;
    }
};

bool parse_sexpr(Lexer& lx, const SExpr& first, SExpr& out) {
    if (first.text != "(") {
        out = first;
        return true;
    }
    out.atom = false;
    out.text.clear();
    out.line = first.line;
    while (true) {
        auto t = lx.token();
        if (!t) {
            lx.diags.push_back({out.line, "unbalanced parenthesis: list never closed"});
            return false;
        }
        if (t->text == ")" && t->atom) return true;
        SExpr kid;
        if (!parse_sexpr(lx, *t, kid)) return false;
        out.kids.push_back(std::move(kid));
    }
}

bool is_numeral(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = s[0] == '-' ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

struct Checker {
    explicit Checker(SmtCheckResult& r) : res(r) {}

    SmtCheckResult& res;
    std::set<std::string> sorts{"Bool", "Int"};
    std::map<std::string, std::pair<std::vector<std::string>, std::string>> funs;
    std::map<std::string, std::string> consts;  // name -> sort

    void diag(int line, std::string msg) { res.diags.push_back({line, std::move(msg)}); }

    bool known_sort(const SExpr& s) {
        if (!s.atom) {
            diag(s.line, "parametric sorts are not produced by the exporter");
            return false;
        }
        if (!sorts.count(s.text)) {
            diag(s.line, "sort '" + s.text + "' used before declaration");
            return false;
        }
        return true;
    }

    // "?" poisons silently so one missing declaration reports once
    std::string term_sort(const SExpr& e, std::map<std::string, std::string>& scope) {
        if (e.atom) {
            if (is_numeral(e.text)) return "Int";
            if (e.text == "true" || e.text == "false") return "Bool";
            if (auto it = scope.find(e.text); it != scope.end()) return it->second;
            if (auto it = consts.find(e.text); it != consts.end()) return it->second;
            if (funs.count(e.text)) {
                diag(e.line, "function '" + e.text + "' used without arguments");
                return "?";
            }
            diag(e.line, "symbol '" + e.text + "' used before declaration");
            return "?";
        }
        if (e.kids.empty() || !e.kids[0].atom) {
            diag(e.line, "application without a head symbol");
            return "?";
        }
        const std::string& h = e.kids[0].text;
        auto args = [&](std::size_t from = 1) {
            std::vector<std::string> out;
            for (std::size_t i = from; i < e.kids.size(); ++i)
                out.push_back(term_sort(e.kids[i], scope));
            return out;
        };
        auto want = [&](const std::vector<std::string>& got, const std::string& sort) {
            for (std::size_t i = 0; i < got.size(); ++i)
                if (got[i] != "?" && got[i] != sort)
                    diag(e.line, "'" + h + "' expects " + sort + " arguments, argument " +
                                     std::to_string(i + 1) + " has sort " + got[i]);
        };
        if (h == "and" || h == "or" || h == "=>") {
            if (e.kids.size() < 3 && h == "=>")
                diag(e.line, "'=>' needs at least two arguments");
            if (e.kids.size() < 2 && h != "=>")
                diag(e.line, "'" + h + "' needs at least one argument");
            want(args(), "Bool");
            return "Bool";
        }
        if (h == "not") {
            if (e.kids.size() != 2) diag(e.line, "'not' takes exactly one argument");
            want(args(), "Bool");
            return "Bool";
        }
        if (h == "=" || h == "distinct") {
            auto got = args();
            if (got.size() < 2) diag(e.line, "'" + h + "' needs at least two arguments");
            std::string common = "?";
            for (const auto& g : got)
                if (g != "?") {
                    if (common == "?") common = g;
                    else if (g != common)
                        diag(e.line, "'" + h + "' compares " + common + " with " + g);
                }
            return "Bool";
        }
        if (h == "ite") {
            auto got = args();
            if (got.size() != 3) {
                diag(e.line, "'ite' takes exactly three arguments");
                return "?";
            }
            if (got[0] != "?" && got[0] != "Bool")
                diag(e.line, "'ite' condition has sort " + got[0]);
            if (got[1] != "?" && got[2] != "?" && got[1] != got[2])
                diag(e.line, "'ite' branches have sorts " + got[1] + " and " + got[2]);
            return got[1] != "?" ? got[1] : got[2];
        }
        if (h == "+" || h == "-" || h == "*") {
            auto got = args();
            if (got.empty()) diag(e.line, "'" + h + "' needs at least one argument");
            want(got, "Int");
            return "Int";
        }
        if (h == "<" || h == "<=" || h == ">" || h == ">=") {
            auto got = args();
            if (got.size() < 2) diag(e.line, "'" + h + "' needs at least two arguments");
            want(got, "Int");
            return "Bool";
        }
        if (h == "forall" || h == "exists") {
            if (e.kids.size() != 3 || e.kids[1].atom) {
                diag(e.line, "'" + h + "' takes a binder list and a body");
                return "Bool";
            }
            auto inner = scope;
            for (const auto& b : e.kids[1].kids) {
                if (b.atom || b.kids.size() != 2 || !b.kids[0].atom) {
                    diag(b.line, "malformed binder in '" + h + "'");
                    continue;
                }
                if (known_sort(b.kids[1])) inner[b.kids[0].text] = b.kids[1].text;
            }
            std::string bs = term_sort(e.kids[2], inner);
            if (bs != "?" && bs != "Bool") diag(e.line, "quantifier body has sort " + bs);
            return "Bool";
        }
        if (auto it = funs.find(h); it != funs.end()) {
            auto got = args();
            const auto& [params, result] = it->second;
            if (got.size() != params.size()) {
                diag(e.line, "'" + h + "' declared with " + std::to_string(params.size()) +
                                 " arguments, applied to " + std::to_string(got.size()));
                return result;
            }
            for (std::size_t i = 0; i < got.size(); ++i)
                if (got[i] != "?" && got[i] != params[i])
                    diag(e.line, "'" + h + "' argument " + std::to_string(i + 1) +
                                     " has sort " + got[i] + ", declared " + params[i]);
            return result;
        }
        if (consts.count(h)) {
            diag(e.line, "constant '" + h + "' applied to arguments");
            return consts[h];
        }
        diag(e.line, "symbol '" + h + "' used before declaration");
        return "?";
    }

    void declare_const(const SExpr& name, const SExpr& sort) {
        if (!name.atom) {
            diag(name.line, "constant name must be a symbol");
            return;
        }
        if (consts.count(name.text) || funs.count(name.text))
            diag(name.line, "symbol '" + name.text + "' declared twice");
        if (known_sort(sort)) consts[name.text] = sort.text;
    }

    void command(const SExpr& c, bool& saw_logic, bool& saw_check) {
        if (c.atom || c.kids.empty() || !c.kids[0].atom) {
            diag(c.line, "top level form is not a command");
            return;
        }
        ++res.commands;
        const std::string& h = c.kids[0].text;
        if (saw_check && h != "exit" && h != "get-model")
            diag(c.line, "command '" + h + "' after (check-sat)");
        if (h == "set-logic") {
            if (res.commands != 1) diag(c.line, "(set-logic ...) must be the first command");
            if (saw_logic) diag(c.line, "(set-logic ...) repeated");
            if (c.kids.size() != 2 || !c.kids[1].atom)
                diag(c.line, "(set-logic ...) takes one symbol");
            saw_logic = true;
            return;
        }
        if (h == "set-option" || h == "set-info" || h == "get-model" || h == "exit") return;
        if (h == "declare-sort") {
            if (c.kids.size() != 3 || !c.kids[1].atom || c.kids[2].text != "0") {
                diag(c.line, "(declare-sort NAME 0) expected");
                return;
            }
            if (!sorts.insert(c.kids[1].text).second)
                diag(c.line, "sort '" + c.kids[1].text + "' declared twice");
            return;
        }
        if (h == "declare-datatypes") {
            if (c.kids.size() != 3 || c.kids[1].atom || c.kids[2].atom) {
                diag(c.line, "(declare-datatypes ((NAME 0)...) (ctors...)) expected");
                return;
            }
            const auto& names = c.kids[1].kids;
            const auto& groups = c.kids[2].kids;
            if (names.size() != groups.size()) {
                diag(c.line, "datatype name and constructor group counts differ");
                return;
            }
            for (std::size_t i = 0; i < names.size(); ++i) {
                const SExpr& nd = names[i];
                if (nd.atom || nd.kids.size() != 2 || !nd.kids[0].atom ||
                    nd.kids[1].text != "0") {
                    diag(nd.line, "datatype declaration must be (NAME 0)");
                    continue;
                }
                const std::string& dt = nd.kids[0].text;
                if (!sorts.insert(dt).second) diag(nd.line, "sort '" + dt + "' declared twice");
                if (groups[i].atom) {
                    diag(groups[i].line, "constructor group must be a list");
                    continue;
                }
                for (const auto& ctor : groups[i].kids) {
                    if (ctor.atom || ctor.kids.empty() || !ctor.kids[0].atom) {
                        diag(ctor.line, "constructor must be (name selectors...)");
                        continue;
                    }
                    if (ctor.kids.size() > 1)
                        diag(ctor.line, "selectors are not produced by the exporter");
                    if (!consts.emplace(ctor.kids[0].text, dt).second)
                        diag(ctor.line, "symbol '" + ctor.kids[0].text + "' declared twice");
                }
            }
            return;
        }
        if (h == "declare-const") {
            if (c.kids.size() != 4 && c.kids.size() != 3) {
                diag(c.line, "(declare-const NAME SORT) expected");
                return;
            }
            if (c.kids.size() == 4) diag(c.line, "(declare-const NAME SORT) expected");
            else declare_const(c.kids[1], c.kids[2]);
            return;
        }
        if (h == "declare-fun") {
            if (c.kids.size() != 4 || !c.kids[1].atom || c.kids[2].atom) {
                diag(c.line, "(declare-fun NAME (SORTS) SORT) expected");
                return;
            }
            if (c.kids[2].kids.empty()) {
                declare_const(c.kids[1], c.kids[3]);
                return;
            }
            std::vector<std::string> params;
            bool ok = true;
            for (const auto& ps : c.kids[2].kids) {
                if (known_sort(ps)) params.push_back(ps.text);
                else ok = false;
            }
            if (!known_sort(c.kids[3])) ok = false;
            if (consts.count(c.kids[1].text) || funs.count(c.kids[1].text))
                diag(c.line, "symbol '" + c.kids[1].text + "' declared twice");
            if (ok) funs[c.kids[1].text] = {std::move(params), c.kids[3].text};
            return;
        }
        if (h == "assert") {
            if (c.kids.size() != 2) {
                diag(c.line, "(assert TERM) takes exactly one term");
                return;
            }
            ++res.asserts;
            std::map<std::string, std::string> scope;
            std::string s = term_sort(c.kids[1], scope);
            if (s != "?" && s != "Bool") diag(c.line, "asserted term has sort " + s);
            return;
        }
        if (h == "check-sat") {
            if (c.kids.size() != 1) diag(c.line, "(check-sat) takes no arguments");
            if (saw_check) diag(c.line, "(check-sat) repeated");
            saw_check = true;
            return;
        }
        diag(c.line, "unknown command '" + h + "'");
    }
};

}  // namespace

std::string SmtCheckResult::str() const {
    if (ok())
        return "ok: " + std::to_string(commands) + " commands, " + std::to_string(asserts) +
               " assertions";
    std::string out;
    for (const auto& d : diags) {
        if (!out.empty()) out += "\n";
        out += "line " + std::to_string(d.line) + ": " + d.message;
    }
    return out;
}

SmtCheckResult smt_check(const std::string& script) {
    SmtCheckResult res;
    Lexer lx{script, 0, 1, res.diags};
    std::vector<SExpr> cmds;
    while (true) {
        auto t = lx.token();
        if (!t) break;
        if (t->atom && t->text == ")") {
            res.diags.push_back({t->line, "unbalanced parenthesis: stray ')'"});
            continue;
        }
        SExpr e;
        if (!parse_sexpr(lx, *t, e)) break;
        cmds.push_back(std::move(e));
    }
    if (!res.diags.empty()) return res;

    Checker ck{res};
    bool saw_logic = false, saw_check = false;
    for (const auto& c : cmds) ck.command(c, saw_logic, saw_check);
    if (!saw_logic) res.diags.push_back({1, "missing (set-logic ...)"});
    if (res.asserts == 0) res.diags.push_back({1, "script asserts nothing"});
    if (!saw_check) res.diags.push_back({1, "missing (check-sat)"});
    return res;
}

}  // namespace rcv
