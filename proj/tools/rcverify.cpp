#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rcv/jsonio.hpp"
#include "rcv/oracle.hpp"
#include "rcv/parser.hpp"
#include "rcv/rewrite.hpp"
#include "rcv/semantics.hpp"
#include "rcv/verify.hpp"
#include "rcv/wellformed.hpp"

using namespace rcv;

namespace {

// Exit codes: 0 success / verified / no deadlock, 1 refuted / deadlock found,
// 2 parse, type or well-formedness error, 3 residual obligations, 4 usage.
constexpr int kOk = 0;
constexpr int kRefuted = 1;
constexpr int kBadInput = 2;
constexpr int kResidual = 3;
constexpr int kUsage = 4;

struct InputError {
    std::string message;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError{"cannot open " + path};
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

StMach load(const std::string& path) {
    try {
        return parse(slurp(path));
    } catch (const ParseError& e) {
        throw InputError{path + ": " + e.what()};
    } catch (const TypeError& e) {
        throw InputError{path + ": " + e.what()};
    }
}

struct DomainOpts {
    int depth = 10;
    std::string int_range = "0..3";
    int seq_max = 2;
    int abstract_tokens = 2;
    std::uint64_t seed = 1;
    std::vector<std::string> fun_files;
    std::vector<std::string> const_vals;
};

void add_domain_flags(CLI::App* cmd, DomainOpts& o) {
    if (const char* env = std::getenv("RCVERIFY_SEED")) o.seed = std::strtoull(env, nullptr, 10);
    cmd->add_option("--depth", o.depth, "trace depth bound");
    cmd->add_option("--int-range", o.int_range, "integer carrier, LO..HI");
    cmd->add_option("--seq-max", o.seq_max, "longest sequence in the carrier");
    cmd->add_option("--abstract-tokens", o.abstract_tokens, "carrier size of abstract types");
    cmd->add_option("--seed", o.seed, "seed for sampled function tables");
    cmd->add_option("--fun", o.fun_files, "NAME=FILE, JSON table for a function");
    cmd->add_option("--const", o.const_vals, "NAME=VALUE, fix a constant");
}

DomainSpec build_domain(const TypeEnv& env, const DomainOpts& o) {
    DomainSpec dom = DomainSpec::defaults_for(env, o.seed);
    auto dots = o.int_range.find("..");
    if (dots == std::string::npos) throw InputError{"--int-range wants LO..HI"};
    dom.int_lo = std::stoll(o.int_range.substr(0, dots));
    dom.int_hi = std::stoll(o.int_range.substr(dots + 2));
    if (dom.int_lo > dom.int_hi) throw InputError{"--int-range is empty"};
    dom.seq_max = o.seq_max;
    dom.abstract_tokens = o.abstract_tokens;
    for (const auto& kv : o.fun_files) {
        auto eqp = kv.find('=');
        if (eqp == std::string::npos) throw InputError{"--fun wants NAME=FILE"};
        std::string name = kv.substr(0, eqp);
        auto sig = env.funs.find(name);
        if (sig == env.funs.end()) throw InputError{"unknown function " + name};
        auto j = nlohmann::json::parse(slurp(kv.substr(eqp + 1)));
        dom.fun_tables[name] = table_from_json(sig->second, j);
    }
    for (const auto& kv : o.const_vals) {
        auto eqp = kv.find('=');
        if (eqp == std::string::npos) throw InputError{"--const wants NAME=VALUE"};
        std::string name = kv.substr(0, eqp);
        std::string val = kv.substr(eqp + 1);
        auto ct = env.consts.find(name);
        if (ct == env.consts.end()) throw InputError{"unknown constant " + name};
        if (ct->second.kind() == TypeKind::Abstract) {
            dom.const_vals[name] = Value::token_v(ct->second.name(), std::stoi(val));
        } else {
            Expr e = parse_expr(env, val);
            dom.const_vals[name] = eval_expr(env, dom, {}, e);
        }
    }
    return dom;
}

Property parse_property(const TypeEnv& env, const std::string& text) {
    if (text == "deadlock") return Property::deadlock_freedom();
    const std::string prefix = "invariant=";
    if (text.rfind(prefix, 0) == 0) {
        Expr inv = parse_expr(env, text.substr(prefix.size()));
        type_check(env, inv, Type::boolean());
        return Property::state_invariant(inv);
    }
    throw InputError{"--property wants 'deadlock' or 'invariant=<expr>'"};
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    if (!out) throw InputError{"cannot write " + p.string()};
    out << text;
}

int run(int argc, char** argv) {
    CLI::App app{"state machine verification toolkit"};
    app.require_subcommand(1);
    std::string file, format = "text", property = "deadlock", node_filter, outdir = ".";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("file", file, "machine source")->required();
        cmd->add_option("--format", format, "text or json")
            ->check(CLI::IsMember({"text", "json"}));
    };

    CLI::App* check = app.add_subcommand("check", "parse and check well-formedness");
    add_common(check);

    CLI::App* compile = app.add_subcommand("compile", "print the compiled reactive program");
    add_common(compile);

    CLI::App* simplify_cmd = app.add_subcommand("simplify", "simplify the per-node programs");
    add_common(simplify_cmd);
    simplify_cmd->add_option("--node", node_filter, "only this node");

    CLI::App* verify_cmd = app.add_subcommand("verify", "generate and discharge obligations");
    add_common(verify_cmd);
    verify_cmd->add_option("--property", property, "deadlock or invariant=<expr>");
    verify_cmd->add_option("--out", outdir, "directory for residual SMT scripts");

    CLI::App* emit = app.add_subcommand("emit-smt", "export every obligation as SMT-LIB");
    add_common(emit);
    emit->add_option("--property", property, "deadlock or invariant=<expr>");
    emit->add_option("--out", outdir, "output directory");

    DomainOpts dopts;
    CLI::App* simulate = app.add_subcommand("simulate", "bounded exploration of the semantics");
    add_common(simulate);
    add_domain_flags(simulate, dopts);
    bool want_deadlock = false;
    simulate->add_flag("--find-deadlock", want_deadlock, "search for a deadlock instead");
    std::string sim_invariant;
    simulate->add_option("--invariant", sim_invariant,
                         "walk the machine and check this invariant at every arrival");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    StMach m = load(file);
    WfReport wf = check_wf(m);

    if (check->parsed()) {
        if (format == "json") {
            nlohmann::json out = wf_json(wf);
            out["machine"] = machine_json(m);
            std::cout << out.dump(2) << "\n";
        } else {
            for (const auto& v : wf.violations)
                std::cout << "violation (" << v.constraint << ") " << v.message << "\n";
            for (const auto& w : wf.warnings)
                std::cout << "warning (" << w.code << ") " << w.message << "\n";
            std::cout << m.name << ": " << (wf.ok() ? "well-formed" : "not well-formed") << "\n";
        }
        return wf.ok() ? kOk : kBadInput;
    }
    if (!wf.ok()) {
        for (const auto& v : wf.violations)
            std::cerr << "violation (" << v.constraint << ") " << v.message << "\n";
        return kBadInput;
    }

    CompiledMachine cm = machine_sem(m);

    if (compile->parsed()) {
        if (format == "json")
            std::cout << prog_json(cm.program).dump(2) << "\n";
        else
            std::cout << to_text_pretty(cm.program) << "\n";
        return kOk;
    }

    if (simplify_cmd->parsed()) {
        nlohmann::json jout = nlohmann::json::object();
        for (const auto& n : cm.mviews.inters) {
            if (!node_filter.empty() && n.name != node_filter) continue;
            RewriteResult res = simplify(cm.per_node.at(n.name));
            if (format == "json") {
                jout[n.name] = rewrite_json(res);
            } else {
                std::cout << n.name << ":\n  " << to_text(res.program) << "\n";
                for (const auto& app_ : res.trace) {
                    std::cout << "    " << rule_name(app_.rule) << " at [";
                    for (std::size_t k = 0; k < app_.path.size(); ++k)
                        std::cout << (k ? " " : "") << app_.path[k];
                    std::cout << "]\n";
                }
            }
        }
        if (format == "json") std::cout << jout.dump(2) << "\n";
        return kOk;
    }

    if (verify_cmd->parsed() || emit->parsed()) {
        Property prop = parse_property(cm.base_env, property);
        if (emit->parsed()) {
            std::filesystem::create_directories(outdir);
            for (const auto& ob : gen_obligations(cm, prop)) {
                auto path = std::filesystem::path(outdir) / (cm.name + "_" + ob.id + ".smt2");
                write_file(path, emit_smt(cm.base_env, ob, cm.name + "." + ob.id));
                std::cout << path.string() << "\n";
            }
            return kOk;
        }
        Report rep = verify(cm, prop);
        if (format == "json")
            std::cout << report_json(rep).dump(2) << "\n";
        else
            std::cout << report_text(rep);
        if (rep.outcome == Report::Outcome::Residual) {
            std::filesystem::create_directories(outdir);
            for (const auto& res : rep.obligations) {
                if (res.smt.empty()) continue;
                auto path = std::filesystem::path(outdir) /
                            (cm.name + "_" + res.obligation.id + ".smt2");
                write_file(path, res.smt);
                std::cerr << "residual obligation written to " << path.string() << "\n";
            }
        }
        switch (rep.outcome) {
            case Report::Outcome::Verified: return kOk;
            case Report::Outcome::Refuted: return kRefuted;
            case Report::Outcome::Residual: return kResidual;
        }
    }

    if (simulate->parsed()) {
        DomainSpec dom = build_domain(cm.base_env, dopts);
        if (!sim_invariant.empty()) {
            Expr inv = parse_expr(cm.base_env, sim_invariant);
            type_check(cm.base_env, inv, Type::boolean());
            auto bad = check_invariant_bounded(m, dom, inv, dopts.depth);
            if (format == "json") {
                nlohmann::json out;
                if (bad) {
                    out["violated"] = true;
                    out["node"] = bad->node;
                    out["steps"] = bad->steps;
                    out["state"] = nlohmann::json::object();
                    for (const auto& [k, v] : bad->state) out["state"][k] = v.str();
                } else {
                    out["violated"] = false;
                }
                std::cout << out.dump(2) << "\n";
            } else if (bad) {
                std::cout << bad->describe() << "\n";
            } else {
                std::cout << "invariant holds within " << dopts.depth << " steps\n";
            }
            return bad ? kRefuted : kOk;
        }
        if (want_deadlock) {
            auto dl = find_deadlock(cm, dom, dopts.depth);
            if (format == "json") {
                std::cout << (dl ? deadlock_json(*dl) : nlohmann::json(nullptr)).dump(2) << "\n";
            } else if (dl) {
                std::cout << "deadlock after " << trace_str(dl->trace) << " in "
                          << state_str(dl->config.state) << "\n";
            } else {
                std::cout << "no deadlock within depth " << dopts.depth << "\n";
            }
            return dl ? kRefuted : kOk;
        }
        auto obs = failures(cm.env, dom, cm.program, dopts.depth);
        if (format == "json") {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& o : obs) arr.push_back(observation_json(o));
            std::cout << arr.dump(2) << "\n";
        } else {
            for (const auto& o : obs) std::cout << o.str() << "\n";
            std::cout << obs.size() << " observations at depth " << dopts.depth << "\n";
        }
        return kOk;
    }

    return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.message << "\n";
        return kBadInput;
    } catch (const WfError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const TypeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kBadInput;
    }
}
