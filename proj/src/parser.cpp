#include "rcv/parser.hpp"

#include <cctype>
#include <set>

namespace rcv {

namespace {

enum class Tok {
    Ident, Int, KwEnum, KwAbstract, KwFun, KwConsts, KwMachine, KwVars, KwEvents, KwStates,
    KwInitial, KwFinals, KwTransitions, KwEntry, KwExit, KwFrom, KwTo, KwTrigger, KwCondition,
    KwAction, KwSkip, KwIf, KwThen, KwElse, KwEnd, KwNot, KwAnd, KwOr, KwTrue, KwFalse,
    LParen, RParen, Comma, Semi, Pipe, Colon, Assign, Eq, Neq, Lt, Le, EmptySeq, Plus, Minus,
    Star, Query, Bang, Arrow, Implies, Eof
};

struct Token {
    Tok kind;
    std::string text;
    std::int64_t value = 0;
    int line = 1;
    int col = 1;
};

const std::map<std::string, Tok, std::less<>> kKeywords = {
    {"enum", Tok::KwEnum},       {"abstract", Tok::KwAbstract}, {"fun", Tok::KwFun},
    {"consts", Tok::KwConsts},   {"statemachine", Tok::KwMachine}, {"vars", Tok::KwVars},
    {"events", Tok::KwEvents},   {"states", Tok::KwStates},     {"initial", Tok::KwInitial},
    {"finals", Tok::KwFinals},   {"transitions", Tok::KwTransitions}, {"entry", Tok::KwEntry},
    {"exit", Tok::KwExit},       {"from", Tok::KwFrom},         {"to", Tok::KwTo},
    {"trigger", Tok::KwTrigger}, {"condition", Tok::KwCondition}, {"action", Tok::KwAction},
    {"skip", Tok::KwSkip},       {"if", Tok::KwIf},             {"then", Tok::KwThen},
    {"else", Tok::KwElse},       {"end", Tok::KwEnd},           {"not", Tok::KwNot},
    {"and", Tok::KwAnd},         {"or", Tok::KwOr},             {"true", Tok::KwTrue},
    {"false", Tok::KwFalse},
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t = next();
            out.push_back(t);
            if (t.kind == Tok::Eof) break;
        }
        return out;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;

    char peek(std::size_t k = 0) const {
        return pos_ + k < src_.size() ? src_[pos_ + k] : '\0';
    }

    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_space() {
        for (;;) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '-' && peek(1) == '-') {
                while (peek() != '\n' && peek() != '\0') advance();
            } else {
                return;
            }
        }
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, col_, msg); }

    Token make(Tok k, std::string text, int line, int col) {
        Token t;
        t.kind = k;
        t.text = std::move(text);
        t.line = line;
        t.col = col;
        return t;
    }

    Token next() {
        int line = line_, col = col_;
        if (pos_ >= src_.size()) return make(Tok::Eof, "", line, col);
        char c = advance();
        switch (c) {
            case '(': return make(Tok::LParen, "(", line, col);
            case ')': return make(Tok::RParen, ")", line, col);
            case ',': return make(Tok::Comma, ",", line, col);
            case ';': return make(Tok::Semi, ";", line, col);
            case '|': return make(Tok::Pipe, "|", line, col);
            case '+': return make(Tok::Plus, "+", line, col);
            case '*': return make(Tok::Star, "*", line, col);
            case '?': return make(Tok::Query, "?", line, col);
            case ':':
                if (peek() == '=') { advance(); return make(Tok::Assign, ":=", line, col); }
                return make(Tok::Colon, ":", line, col);
            case '=':
                if (peek() == '>') { advance(); return make(Tok::Implies, "=>", line, col); }
                return make(Tok::Eq, "=", line, col);
            case '!':
                if (peek() == '=') { advance(); return make(Tok::Neq, "!=", line, col); }
                return make(Tok::Bang, "!", line, col);
            case '<':
                if (peek() == '=') { advance(); return make(Tok::Le, "<=", line, col); }
                if (peek() == '>') { advance(); return make(Tok::EmptySeq, "<>", line, col); }
                return make(Tok::Lt, "<", line, col);
            case '-':
                if (peek() == '>') { advance(); return make(Tok::Arrow, "->", line, col); }
                return make(Tok::Minus, "-", line, col);
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num(1, c);
            while (std::isdigit(static_cast<unsigned char>(peek()))) num.push_back(advance());
            Token t = make(Tok::Int, num, line, col);
            t.value = std::stoll(num);
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id(1, c);
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
                id.push_back(advance());
            auto it = kKeywords.find(id);
            if (it != kKeywords.end()) return make(it->second, id, line, col);
            return make(Tok::Ident, id, line, col);
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

// ---------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

    StMach parse_file() {
        StMach m;
        parse_preamble(m.env);
        expect(Tok::KwMachine, "expected 'statemachine'");
        m.name = expect_ident("machine name");
        bool saw_initial = false;
        for (;;) {
            if (at(Tok::KwVars)) {
                advance();
                parse_name_decls(m.env, DeclSection::Vars);
            } else if (at(Tok::KwEvents)) {
                advance();
                parse_name_decls(m.env, DeclSection::Events);
            } else if (at(Tok::KwStates)) {
                advance();
                parse_states(m);
            } else if (at(Tok::KwInitial)) {
                advance();
                m.init = expect_ident("initial state name");
                saw_initial = true;
            } else if (at(Tok::KwFinals)) {
                advance();
                while (at(Tok::Ident)) m.finals.push_back(advance_tok().text);
            } else if (at(Tok::KwTransitions)) {
                advance();
                parse_transitions(m);
            } else {
                break;
            }
        }
        expect(Tok::Eof, "unexpected trailing input");
        if (!saw_initial) fail("machine has no 'initial' section");
        type_check_machine(m);
        return m;
    }

    Expr parse_standalone_expr(const TypeEnv& env) {
        env_ = &env;
        Expr e = parse_expr();
        expect(Tok::Eof, "unexpected trailing input after expression");
        return e;
    }

private:
    enum class DeclSection { Vars, Events, Consts };

    std::vector<Token> toks_;
    std::size_t idx_ = 0;
    const TypeEnv* env_ = nullptr;  // for constructor resolution in expressions

    const Token& cur() const { return toks_[idx_]; }
    bool at(Tok k) const { return cur().kind == k; }
    bool at_ident(std::size_t ahead = 0) const {
        return idx_ + ahead < toks_.size() && toks_[idx_ + ahead].kind == Tok::Ident;
    }
    Tok peek_kind(std::size_t ahead) const {
        return idx_ + ahead < toks_.size() ? toks_[idx_ + ahead].kind : Tok::Eof;
    }

    void advance() { ++idx_; }
    Token advance_tok() { return toks_[idx_++]; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(cur().line, cur().col, msg);
    }

    void expect(Tok k, const std::string& msg) {
        if (!at(k)) fail(msg + " (found '" + (at(Tok::Eof) ? "end of input" : cur().text) + "')");
        advance();
    }

    std::string expect_ident(const std::string& what) {
        if (!at(Tok::Ident)) fail("expected " + what);
        return advance_tok().text;
    }

    void check_declarable(const std::string& n) {
        if (n == "actv" || n == "eps") fail("'" + n + "' is a reserved name");
    }

    // -- preamble ------------------------------------------------------

    void parse_preamble(TypeEnv& env) {
        env_ = &env;
        for (;;) {
            if (at(Tok::KwEnum)) {
                advance();
                std::string name = expect_ident("enum type name");
                check_declarable(name);
                expect(Tok::Eq, "expected '=' in enum declaration");
                std::vector<std::string> ctors;
                ctors.push_back(expect_ident("enum constructor"));
                while (at(Tok::Pipe)) {
                    advance();
                    ctors.push_back(expect_ident("enum constructor"));
                }
                for (const auto& c : ctors) check_declarable(c);
                wrap_type_errors([&] { env.declare_type(name, Type::enumeration(name, ctors)); });
            } else if (at(Tok::KwAbstract)) {
                advance();
                std::string name = expect_ident("abstract type name");
                check_declarable(name);
                wrap_type_errors([&] { env.declare_type(name, Type::abstract(name)); });
            } else if (at(Tok::KwFun)) {
                advance();
                std::string name = expect_ident("function name");
                check_declarable(name);
                expect(Tok::Colon, "expected ':' in function declaration");
                expect(Tok::LParen, "expected '(' before parameter types");
                FunSig sig;
                if (!at(Tok::RParen)) {
                    sig.params.push_back(parse_type(env));
                    while (at(Tok::Comma)) {
                        advance();
                        sig.params.push_back(parse_type(env));
                    }
                }
                expect(Tok::RParen, "expected ')' after parameter types");
                expect(Tok::Arrow, "expected '->' before result type");
                sig.result = parse_type(env);
                wrap_type_errors([&] { env.declare_fun(name, sig); });
            } else if (at(Tok::KwConsts)) {
                advance();
                parse_name_decls(env, DeclSection::Consts);
            } else {
                return;
            }
        }
    }

    template <class F>
    void wrap_type_errors(F&& f) {
        try {
            f();
        } catch (const TypeError& e) {
            fail(e.what());
        }
    }

    Type parse_type(const TypeEnv& env) {
        if (at(Tok::Ident)) {
            Token t = advance_tok();
            const std::string& n = t.text;
            if (n == "int") return Type::integer();
            if (n == "bool") return Type::boolean();
            if (n == "Seq") {
                expect(Tok::LParen, "expected '(' after Seq");
                Type e = parse_type(env);
                expect(Tok::RParen, "expected ')' after Seq element type");
                return Type::seq(e);
            }
            auto it = env.named_types.find(n);
            if (it == env.named_types.end())
                throw ParseError(t.line, t.col, "unknown type '" + n + "'");
            return it->second;
        }
        fail("expected a type");
    }

    void parse_name_decls(TypeEnv& env, DeclSection section) {
        while (at(Tok::Ident)) {
            // A new transition/state section never starts here; lists end at
            // the next section keyword.
            std::string name = advance_tok().text;
            check_declarable(name);
            std::optional<Type> type;
            if (at(Tok::Colon)) {
                advance();
                type = parse_type(env);
            }
            switch (section) {
                case DeclSection::Vars:
                    if (!type) fail("variable '" + name + "' needs a type");
                    wrap_type_errors([&] { env.declare_var(name, *type); });
                    break;
                case DeclSection::Events:
                    wrap_type_errors([&] { env.declare_event(name, type); });
                    break;
                case DeclSection::Consts: {
                    if (!type) fail("constant '" + name + "' needs a type");
                    std::optional<Expr> init;
                    if (at(Tok::Eq)) {
                        advance();
                        init = parse_literal(*type);
                    }
                    wrap_type_errors([&] {
                        if (init) type_check(env, *init, *type);
                        env.declare_const(name, *type, init);
                    });
                    break;
                }
            }
        }
    }

    Expr parse_literal(const Type& expected) {
        if (at(Tok::Int)) return Expr::int_lit(advance_tok().value);
        if (at(Tok::KwTrue)) { advance(); return Expr::bool_lit(true); }
        if (at(Tok::KwFalse)) { advance(); return Expr::bool_lit(false); }
        if (at(Tok::EmptySeq)) { advance(); return Expr::empty_seq(); }
        if (at(Tok::Ident)) {
            std::string n = cur().text;
            if (auto t = env_->lookup_ctor(n)) {
                advance();
                return Expr::enum_lit(*t, n);
            }
            fail("'" + n + "' is not a literal");
        }
        fail("expected a literal initializer");
        (void)expected;
    }

    // -- machine body --------------------------------------------------

    void parse_states(StMach& m) {
        while (at(Tok::Ident)) {
            NodeDecl nd;
            nd.name = advance_tok().text;
            check_declarable(nd.name);
            if (at(Tok::KwEntry)) {
                advance();
                nd.entry = parse_action();
            }
            if (at(Tok::KwExit)) {
                advance();
                nd.exit = parse_action();
            }
            m.nodes.push_back(std::move(nd));
        }
    }

    void parse_transitions(StMach& m) {
        // Each transition starts with "<id> from"; anything else ends the list.
        while (at(Tok::Ident) && peek_kind(1) == Tok::KwFrom) {
            TransDecl t;
            t.id = advance_tok().text;
            expect(Tok::KwFrom, "expected 'from'");
            t.src = expect_ident("source state");
            expect(Tok::KwTo, "expected 'to'");
            t.tgt = expect_ident("target state");
            if (at(Tok::KwTrigger)) {
                advance();
                t.trigger = parse_event_ref();
            }
            if (at(Tok::KwCondition)) {
                advance();
                t.cond = parse_expr();
            }
            if (at(Tok::KwAction)) {
                advance();
                t.act = parse_action();
            }
            m.transitions.push_back(std::move(t));
        }
        if (at(Tok::Ident)) fail("expected 'from' after transition id '" + cur().text + "'");
    }

    EventRef parse_event_ref() {
        std::string chan = expect_ident("event name");
        if (at(Tok::Query)) {
            advance();
            return EventRef::input(chan, expect_ident("input target variable"));
        }
        if (at(Tok::Bang)) {
            advance();
            return EventRef::output(chan, parse_primary());
        }
        return EventRef::simple(chan);
    }

    // -- actions ---------------------------------------------------------

    Action parse_action() {
        Action a = parse_action_atom();
        if (at(Tok::Semi)) {
            advance();
            return Action::seq(std::move(a), parse_action());
        }
        return a;
    }

    Action parse_action_atom() {
        if (at(Tok::KwSkip)) {
            advance();
            return Action::skip();
        }
        if (at(Tok::KwIf)) {
            advance();
            Expr b = parse_expr();
            expect(Tok::KwThen, "expected 'then'");
            Action th = parse_action();
            expect(Tok::KwElse, "expected 'else'");
            Action el = parse_action();
            expect(Tok::KwEnd, "expected 'end'");
            return Action::cond(std::move(b), std::move(th), std::move(el));
        }
        if (at(Tok::Ident)) {
            if (peek_kind(1) == Tok::Assign) {
                std::string var = advance_tok().text;
                advance();  // :=
                return Action::assign(std::move(var), parse_expr());
            }
            return Action::event(parse_event_ref());
        }
        fail("expected an action");
    }

    // -- expressions -----------------------------------------------------

    Expr parse_expr() { return parse_implies(); }

    Expr parse_implies() {
        Expr l = parse_or();
        if (at(Tok::Implies)) {
            advance();
            return Expr::bin(BinOp::Implies, std::move(l), parse_implies());
        }
        return l;
    }

    Expr parse_or() {
        Expr l = parse_and();
        if (at(Tok::KwOr)) {
            advance();
            return Expr::bin(BinOp::Or, std::move(l), parse_or());
        }
        return l;
    }

    Expr parse_and() {
        Expr l = parse_cmp();
        if (at(Tok::KwAnd)) {
            advance();
            return Expr::bin(BinOp::And, std::move(l), parse_and());
        }
        return l;
    }

    Expr parse_cmp() {
        Expr l = parse_add();
        BinOp op;
        if (at(Tok::Eq)) op = BinOp::Eq;
        else if (at(Tok::Neq)) op = BinOp::Neq;
        else if (at(Tok::Lt)) op = BinOp::Lt;
        else if (at(Tok::Le)) op = BinOp::Le;
        else return l;
        advance();
        return Expr::bin(op, std::move(l), parse_add());
    }

    Expr parse_add() {
        Expr l = parse_mul();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            BinOp op = at(Tok::Plus) ? BinOp::Add : BinOp::Sub;
            advance();
            l = Expr::bin(op, std::move(l), parse_mul());
        }
        return l;
    }

    Expr parse_mul() {
        Expr l = parse_unary();
        while (at(Tok::Star)) {
            advance();
            l = Expr::bin(BinOp::Mul, std::move(l), parse_unary());
        }
        return l;
    }

    Expr parse_unary() {
        if (at(Tok::KwNot)) {
            advance();
            return Expr::un(UnOp::Not, parse_unary());
        }
        return parse_primary();
    }

    Expr parse_primary() {
        if (at(Tok::Int)) return Expr::int_lit(advance_tok().value);
        if (at(Tok::KwTrue)) { advance(); return Expr::bool_lit(true); }
        if (at(Tok::KwFalse)) { advance(); return Expr::bool_lit(false); }
        if (at(Tok::EmptySeq)) { advance(); return Expr::empty_seq(); }
        if (at(Tok::LParen)) {
            advance();
            Expr e = parse_expr();
            expect(Tok::RParen, "expected ')'");
            return e;
        }
        if (at(Tok::Ident)) {
            std::string n = advance_tok().text;
            if (at(Tok::LParen)) {
                advance();
                std::vector<Expr> args;
                if (!at(Tok::RParen)) {
                    args.push_back(parse_expr());
                    while (at(Tok::Comma)) {
                        advance();
                        args.push_back(parse_expr());
                    }
                }
                expect(Tok::RParen, "expected ')' after arguments");
                return Expr::app(n, std::move(args));
            }
            if (env_) {
                if (auto t = env_->lookup_ctor(n)) return Expr::enum_lit(*t, n);
            }
            return Expr::var(n);
        }
        fail("expected an expression");
    }
};

}  // namespace

StMach parse(std::string_view text) {
    Parser p(text);
    return p.parse_file();
}

Expr parse_expr(const TypeEnv& env, std::string_view text) {
    Parser p(text);
    return p.parse_standalone_expr(env);
}

}  // namespace rcv
