#include "opn/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "opn/algebra.hpp"
#include "opn/engine.hpp"
#include "opn/netfile.hpp"
#include "opn/trace_io.hpp"

namespace opn::cli {

namespace {

// Raised for malformed flag values; mapped to kUsageError.
class UsageError : public Error {
public:
    using Error::Error;
};

std::string table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& row : rows) {
        width.resize(std::max(width.size(), row.size()), 0);
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            line += row[c];
            if (c + 1 < row.size()) line += std::string(width[c] - row[c].size() + 2, ' ');
        }
        line.erase(line.find_last_not_of(' ') + 1);
        out += line + '\n';
    }
    return out;
}

Environment parse_env_flags(const std::vector<std::string>& flags) {
    Environment env;
    for (const auto& flag : flags) {
        try {
            env = env.overlaid(parse_env_bindings(flag));
        } catch (const Error& e) {
            throw UsageError(std::string("--env: ") + e.what());
        }
    }
    return env;
}

// "step:name=value[,name=value]" with 1-based steps.
std::map<std::size_t, Environment> parse_env_at_flags(const std::vector<std::string>& flags) {
    std::map<std::size_t, Environment> out;
    for (const auto& flag : flags) {
        const auto colon = flag.find(':');
        if (colon == std::string::npos) throw UsageError("--env-at '" + flag + "': expected step:name=value");
        std::size_t step = 0;
        auto [ptr, ec] = std::from_chars(flag.data(), flag.data() + colon, step);
        if (ec != std::errc() || ptr != flag.data() + colon || step == 0) {
            throw UsageError("--env-at '" + flag + "': step must be a positive integer");
        }
        try {
            out[step] = out[step].overlaid(parse_env_bindings(std::string_view(flag).substr(colon + 1)));
        } catch (const Error& e) {
            throw UsageError("--env-at '" + flag + "': " + e.what());
        }
    }
    return out;
}

std::vector<std::string> split_sequence(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item.empty()) throw UsageError("--seq contains an empty transition name");
        out.push_back(item);
    }
    return out;
}

void print_trace(std::ostream& out, const Net& net, const TraceDocument& doc) {
    out << "net: " << doc.trace.net_name << " (mode " << to_string(doc.mode) << ")\n";
    out << "initial: " << render_marking_spec(net, doc.trace.initial) << '\n';
    if (!doc.trace.events.empty()) {
        std::vector<std::vector<std::string>> rows = {{"step", "transition", "marking", "env"}};
        for (const auto& e : doc.trace.events) {
            rows.push_back({std::to_string(e.step), e.transition, render_marking_spec(net, e.marking_after),
                            render_env(e.env)});
        }
        out << table(rows);
    }
    const Marking& final = doc.trace.final_marking();
    out << "final: " << render_marking_spec(net, final) << '\n';
    out << "vector: " << render_marking_vector(net, final) << '\n';
    out << "deadlock: " << (doc.deadlock ? "yes" : "no") << '\n';
}

void write_out(const std::string& path, const TraceDocument& doc) {
    if (path.empty()) return;
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw UsageError("cannot write " + path);
    file << write_trace_json(doc);
}

ContainmentMode mode_from(const std::string& text) {
    try {
        return parse_containment_mode(text);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

struct Options {
    std::string net_path;
    std::string seq;
    std::vector<std::string> env;
    std::vector<std::string> env_at;
    std::string mode = "subset";
    std::string out_path;
    std::size_t steps = 1;
    std::string policy = "sweep";
    std::string format = "grid";
    std::string target;
    std::uint64_t bound = 0;
    bool confirm = false;
    bool expect = false;
    std::size_t max_states = 100000;
};

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
    auto checked = load_net_unvalidated(o.net_path);
    const Net& net = checked.net;
    if (!checked.violations.empty()) {
        err << "INVALID: " << net.name << '\n';
        for (const auto& d : checked.violations) {
            err << o.net_path;
            if (d.line) err << ':' << d.line;
            err << ": " << d.message << '\n';
        }
        return kSemanticFailure;
    }
    out << "OK\n";
    out << "net: " << net.name << '\n';
    out << "order: " << net.order() << '\n';
    out << "places:";
    for (const auto& p : net.places) out << ' ' << p.id << rotation_symbol(p.rotation);
    out << '\n';
    out << "transitions:";
    for (const auto& t : net.transitions) out << ' ' << t.id;
    out << '\n';
    out << "arcs: " << net.arcs.size() << '\n';
    out << "colors:";
    for (const auto& c : net.colors) out << ' ' << c.name;
    out << '\n';
    out << "initial: " << render_marking_spec(net, net.initial_marking) << '\n';
    return kSuccess;
}

int cmd_fire(const Options& o, std::ostream& out, std::ostream& err) {
    const Net net = load_net(o.net_path);
    const ContainmentMode mode = mode_from(o.mode);
    const auto seq = o.seq.empty() ? std::vector<std::string>{} : split_sequence(o.seq);
    const Environment base = parse_env_flags(o.env);
    const auto overrides = parse_env_at_flags(o.env_at);
    for (const auto& [step, env] : overrides) {
        if (step > seq.size()) throw UsageError("--env-at step " + std::to_string(step) + " is past the sequence end");
    }
    for (const auto& t : seq) {
        if (!net.transition_index(t)) throw UsageError("unknown transition '" + t + "'");
    }

    std::vector<Environment> envs;
    for (std::size_t k = 1; k <= seq.size(); ++k) {
        auto it = overrides.find(k);
        envs.push_back(it == overrides.end() ? base : base.overlaid(it->second));
    }

    TraceDocument doc;
    doc.mode = mode;
    try {
        doc.trace = fire_sequence(net, net.initial_marking, seq, envs, mode);
    } catch (const FiringSequenceError& e) {
        doc.trace = e.prefix();
        doc.deadlock = enabled_set(net, doc.trace.final_marking(), envs[e.step() - 1], mode).empty();
        print_trace(out, net, doc);
        write_out(o.out_path, doc);
        err << "error: " << e.what() << '\n';
        return kSemanticFailure;
    }
    const Environment& last = envs.empty() ? base : envs.back();
    doc.deadlock = enabled_set(net, doc.trace.final_marking(), last, mode).empty();
    print_trace(out, net, doc);
    write_out(o.out_path, doc);
    return kSuccess;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream&) {
    const Net net = load_net(o.net_path);
    const ContainmentMode mode = mode_from(o.mode);
    FiringPolicy policy;
    try {
        policy = parse_firing_policy(o.policy);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    const Environment env = parse_env_flags(o.env);

    TraceDocument doc;
    doc.mode = mode;
    doc.trace = {net.name, net.initial_marking, {}};
    Marking current = net.initial_marking;
    bool quiescent = false;
    for (std::size_t s = 1; s <= o.steps; ++s) {
        auto result = step(net, current, env, policy, mode);
        for (std::size_t k = 0; k < result.fired.size(); ++k) {
            doc.trace.events.push_back({s, result.fired[k], env, result.after[k]});
        }
        current = std::move(result.marking);
        const bool fired_any = !result.fired.empty();
        if (!fired_any) {
            quiescent = true;
            break;
        }
    }
    doc.deadlock = quiescent || enabled_set(net, current, env, mode).empty();
    print_trace(out, net, doc);
    write_out(o.out_path, doc);
    return kSuccess;
}

int cmd_incidence(const Options& o, std::ostream& out, std::ostream&) {
    const Net net = load_net(o.net_path);
    const auto a = incidence_matrix(net);
    if (o.format == "grid") {
        out << render_grid(a);
    } else if (o.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t j = 0; j < a.rows(); ++j) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t i = 0; i < a.cols(); ++i) row.push_back(render_signed(a.at(j, i)));
            rows.push_back(std::move(row));
        }
        nlohmann::json doc = {{"net", net.name}, {"places", a.places}, {"transitions", a.transitions}, {"matrix", rows}};
        out << doc.dump(2) << '\n';
    } else {
        throw UsageError("--format must be grid or json");
    }
    return kSuccess;
}

int cmd_reach(const Options& o, std::ostream& out, std::ostream&) {
    const Net net = load_net(o.net_path);
    const ContainmentMode mode = mode_from(o.mode);
    Marking target;
    try {
        target = parse_marking_spec(o.target, net);
    } catch (const Error& e) {
        throw UsageError(std::string("--target: ") + e.what());
    }

    out << "initial: " << render_marking_spec(net, net.initial_marking) << '\n';
    out << "target: " << render_marking_spec(net, target) << '\n';
    out << "bound: " << o.bound << '\n';
    const auto witness = check_reachability_condition(net, net.initial_marking, target, o.bound);
    bool ok = witness.has_value();
    if (witness) {
        out << "witness: X = " << render_counts(*witness) << '\n';
        out << "necessary condition satisfied: target - initial = A X (not sufficient for reachability)\n";
    } else {
        out << "witness: none with at most " << o.bound << " total firings\n";
    }

    if (o.confirm) {
        const Environment env = parse_env_flags(o.env);
        const auto graph = reachability_graph(net, net.initial_marking, env, o.bound, o.max_states, mode);
        if (auto node = graph.find(target)) {
            out << "bfs: reached at depth " << graph.depth[*node] << " (" << graph.nodes.size() << " states explored)\n";
        } else {
            out << "bfs: not reached within depth " << o.bound << " (" << graph.nodes.size() << " states explored"
                << (graph.truncated ? ", truncated" : "") << ")\n";
            ok = false;
        }
    }
    return (o.expect && !ok) ? kSemanticFailure : kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Orbital Petri net engine: validate, fire, simulate and analyse nets", "opn"};
    app.require_subcommand(1);
    Options o;

    auto add_net = [&](CLI::App* sub) { sub->add_option("net", o.net_path, "Net definition file")->required(); };
    auto add_env = [&](CLI::App* sub) {
        sub->add_option("--env", o.env, "Variable bindings name=value[,name=value]")->take_all();
    };
    auto add_mode = [&](CLI::App* sub) { sub->add_option("--mode", o.mode, "Enabling mode: subset or exact"); };

    auto* validate = app.add_subcommand("validate", "Check a net file and report its structure");
    add_net(validate);

    auto* fire_cmd = app.add_subcommand("fire", "Fire an explicit transition sequence");
    add_net(fire_cmd);
    fire_cmd->add_option("--seq", o.seq, "Comma-separated transition ids");
    add_env(fire_cmd);
    fire_cmd->add_option("--env-at", o.env_at, "Per-step bindings step:name=value[,name=value]")->take_all();
    add_mode(fire_cmd);
    fire_cmd->add_option("--out", o.out_path, "Write the trace as JSON");

    auto* simulate = app.add_subcommand("simulate", "Run the net under a firing policy");
    add_net(simulate);
    simulate->add_option("--steps", o.steps, "Maximum number of steps");
    simulate->add_option("--policy", o.policy, "sweep or single");
    add_env(simulate);
    add_mode(simulate);
    simulate->add_option("--out", o.out_path, "Write the trace as JSON");

    auto* incidence = app.add_subcommand("incidence", "Print the incidence matrix");
    add_net(incidence);
    incidence->add_option("--format", o.format, "grid or json");

    auto* reach = app.add_subcommand("reach", "Search a state-equation witness for a target marking");
    add_net(reach);
    reach->add_option("--target", o.target, "Target marking, e.g. 'P5=A+C; P6=B+D'")->required();
    reach->add_option("--bound", o.bound, "Maximum total number of firings")->required();
    reach->add_flag("--confirm", o.confirm, "Confirm by breadth-first exploration");
    reach->add_flag("--expect", o.expect, "Exit 1 when no witness (or BFS confirmation) is found");
    reach->add_option("--max-states", o.max_states, "State limit for --confirm");
    add_env(reach);
    add_mode(reach);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }

    try {
        if (validate->parsed()) return cmd_validate(o, out, err);
        if (fire_cmd->parsed()) return cmd_fire(o, out, err);
        if (simulate->parsed()) return cmd_simulate(o, out, err);
        if (incidence->parsed()) return cmd_incidence(o, out, err);
        return cmd_reach(o, out, err);
    } catch (const NetLoadError& e) {
        err << e.what() << '\n';
        return kUsageError;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const UnboundVariableError& e) {
        err << "error: " << e.what() << " (bind it with --env)\n";
        return kUsageError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kSemanticFailure;
    }
}

}  // namespace opn::cli
