#include "opn/trace_io.hpp"

#include <json.hpp>

namespace opn {

using nlohmann::json;

namespace {

json marking_to_json(const Marking& m) {
    json out = json::object();
    for (const auto& [place, tokens] : m.places()) out[place] = render_weight_expr(tokens);
    return out;
}

Marking marking_from_json(const json& j, const Net& net) {
    if (!j.is_object()) throw Error("trace marking must be an object");
    Marking m;
    for (const auto& [place, expr] : j.items()) {
        if (!net.place_index(place)) throw Error("trace names undeclared place '" + place + "'");
        if (!expr.is_string()) throw Error("trace marking entry for " + place + " must be a string");
        m.set(place, parse_weight_expr(expr.get<std::string>(), net.colors));
    }
    return m;
}

json env_to_json(const Environment& env) {
    json out = json::object();
    for (const auto& [name, value] : env.values()) out[name] = value;
    return out;
}

Environment env_from_json(const json& j) {
    if (!j.is_object()) throw Error("trace environment must be an object");
    Environment env;
    for (const auto& [name, value] : j.items()) {
        if (!value.is_number()) throw Error("environment value for " + name + " must be a number");
        env.set(name, value.get<double>());
    }
    return env;
}

}  // namespace

std::string write_trace_json(const TraceDocument& doc, int indent) {
    json events = json::array();
    for (const auto& e : doc.trace.events) {
        events.push_back({
            {"step", e.step},
            {"transition", e.transition},
            {"env", env_to_json(e.env)},
            {"marking", marking_to_json(e.marking_after)},
        });
    }
    json out = {
        {"net", doc.trace.net_name},
        {"mode", std::string(to_string(doc.mode))},
        {"initial", marking_to_json(doc.trace.initial)},
        {"events", std::move(events)},
        {"final", marking_to_json(doc.trace.final_marking())},
        {"deadlock", doc.deadlock},
    };
    return out.dump(indent) + "\n";
}

TraceDocument read_trace_json(std::string_view text, const Net& net) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("trace is not valid JSON: ") + e.what());
    }
    try {
        TraceDocument doc;
        doc.trace.net_name = j.at("net").get<std::string>();
        doc.mode = parse_containment_mode(j.at("mode").get<std::string>());
        doc.trace.initial = marking_from_json(j.at("initial"), net);
        for (const auto& e : j.at("events")) {
            doc.trace.events.push_back({
                e.at("step").get<std::size_t>(),
                e.at("transition").get<std::string>(),
                env_from_json(e.at("env")),
                marking_from_json(e.at("marking"), net),
            });
        }
        doc.deadlock = j.at("deadlock").get<bool>();
        if (marking_from_json(j.at("final"), net) != doc.trace.final_marking()) {
            throw Error("trace 'final' does not match the last event");
        }
        return doc;
    } catch (const json::exception& e) {
        throw Error(std::string("malformed trace document: ") + e.what());
    }
}

}  // namespace opn
