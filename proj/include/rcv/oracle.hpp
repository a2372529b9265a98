#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rcv/rprog.hpp"
#include "rcv/semantics.hpp"

namespace rcv {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// -------------------------------------------------------------------------
// Concrete values over bounded carriers
// -------------------------------------------------------------------------

struct Value {
    enum class Kind { Bool, Int, Enum, Seq, Token };
    Kind kind = Kind::Bool;
    bool b = false;
    std::int64_t i = 0;
    std::string type_name;    // Enum and Token
    std::string ctor;         // Enum
    int token = 0;            // Token index
    std::vector<Value> seq;

    static Value boolean(bool v);
    static Value integer(std::int64_t v);
    static Value enum_v(std::string type_name, std::string ctor);
    static Value token_v(std::string type_name, int idx);
    static Value seq_v(std::vector<Value> elems);

    bool operator==(const Value& o) const;
    bool operator!=(const Value& o) const { return !(*this == o); }
    bool operator<(const Value& o) const;
    std::string str() const;
};

using State = std::map<std::string, Value>;
std::string state_str(const State& s);

struct Event {
    std::string chan;
    std::optional<Value> payload;

    bool operator==(const Event& o) const { return chan == o.chan && payload == o.payload; }
    bool operator<(const Event& o) const;
    std::string str() const;
};

std::string trace_str(const std::vector<Event>& t);

// -------------------------------------------------------------------------
// Domains
// -------------------------------------------------------------------------

struct FunTable {
    std::vector<std::pair<std::vector<Value>, Value>> entries;
    std::optional<Value> fallback;
};

// Finite carriers for every type plus interpretations for constants and
// function symbols. Functions without an explicit table are sampled
// deterministically from the seed.
struct DomainSpec {
    std::int64_t int_lo = 0;
    std::int64_t int_hi = 3;
    int seq_max = 2;
    int abstract_tokens = 2;
    std::uint64_t seed = 0;
    std::map<std::string, Value> const_vals;
    std::map<std::string, FunTable> fun_tables;

    // Fills const_vals for every constant of env: declared initializer if
    // present, else the first carrier element.
    static DomainSpec defaults_for(const TypeEnv& env, std::uint64_t seed);

    std::vector<Value> carrier(const Type& t) const;
    Value eval_fun(const TypeEnv& env, const std::string& fn, const std::vector<Value>& args) const;
};

std::uint64_t fnv1a64(const std::string& data, std::uint64_t h = 14695981039346656037ull);

Value eval_expr(const TypeEnv& env, const DomainSpec& dom, const State& s, const Expr& e);

// Every event of env at every payload value, in declaration order.
std::vector<Event> alphabet(const TypeEnv& env, const DomainSpec& dom);

// Cross product of variable carriers in declaration order, constants fixed by
// the domain. The control variable actv, when present, is pinned to its first
// constructor (the compiled program overwrites it before any read).
std::vector<State> initial_valuations(const TypeEnv& env, const DomainSpec& dom);

// -------------------------------------------------------------------------
// Exploration
// -------------------------------------------------------------------------

struct Config {
    RProg rest;
    State state;
};

enum class ObsStatus { Quiescent, Terminated, DivergentBound, ChaosSink };
const char* obs_status_name(ObsStatus s);

struct Observation {
    std::vector<Event> trace;
    std::vector<Event> refusal;           // complement of the offers at a stable config
    ObsStatus status = ObsStatus::Quiescent;
    std::optional<State> final_state;     // Terminated only

    bool operator==(const Observation& o) const;
    bool operator<(const Observation& o) const;
    std::string str() const;
};

// Labeled one-step successors of a configuration, deterministic order.
std::vector<std::pair<Event, Config>> step(const TypeEnv& env, const DomainSpec& dom,
                                           const Config& cfg);

// All observations of p started at s0, traces cut at depth.
std::set<Observation> failures_from(const TypeEnv& env, const DomainSpec& dom, const RProg& p,
                                    int depth, const State& s0);

// Union over all initial valuations.
std::set<Observation> failures(const TypeEnv& env, const DomainSpec& dom, const RProg& p,
                               int depth);

struct EquivResult {
    bool equal = true;
    State initial;                        // witness valuation when unequal
    std::optional<Observation> witness;   // observation present on one side only
    int side = 0;                         // 1: only in lhs, 2: only in rhs
    std::string describe() const;
};

EquivResult equiv(const TypeEnv& env, const DomainSpec& dom, const RProg& lhs, const RProg& rhs,
                  int depth);

struct DeadlockResult {
    std::vector<Event> trace;
    Config config;
    State initial;
};

// Shortest trace to an all-refusing, non-terminated stable configuration of
// the compiled machine, searched over every initial valuation. Termination at
// a final node is not a deadlock.
std::optional<DeadlockResult> find_deadlock(const CompiledMachine& m, const DomainSpec& dom,
                                            int depth);

struct InvariantViolation {
    std::vector<std::string> steps;  // transition ids taken
    std::string node;                // node arrived at
    State state;
    State initial;
    std::string describe() const;
};

// Walks the machine at the declaration level (independent of compilation):
// arrival at a node, entry action, enabled transitions, arrival at the
// target. The invariant is checked at every arrival, before the entry runs.
// Inputs branch over the payload carrier; at most max_steps transitions.
std::optional<InvariantViolation> check_invariant_bounded(const StMach& m, const DomainSpec& dom,
                                                          const Expr& inv, int max_steps);

}  // namespace rcv
