#include "opn/engine.hpp"

namespace opn {

std::string_view to_string(ContainmentMode mode) {
    return mode == ContainmentMode::Exact ? "exact" : "subset";
}

std::string_view to_string(FiringPolicy policy) {
    return policy == FiringPolicy::Single ? "single" : "sweep";
}

ContainmentMode parse_containment_mode(std::string_view text) {
    if (text == "subset") return ContainmentMode::Subset;
    if (text == "exact") return ContainmentMode::Exact;
    throw Error("unknown containment mode '" + std::string(text) + "' (expected subset or exact)");
}

FiringPolicy parse_firing_policy(std::string_view text) {
    if (text == "sweep") return FiringPolicy::Sweep;
    if (text == "single") return FiringPolicy::Single;
    throw Error("unknown firing policy '" + std::string(text) + "' (expected sweep or single)");
}

std::string EnablingCheck::describe(std::string_view transition) const {
    const std::string t(transition);
    switch (failure) {
        case EnablingFailure::None: return t + " is enabled";
        case EnablingFailure::NoInputArcs: return t + " has no input arcs";
        case EnablingFailure::TokensMissing: return t + " cannot call its tokens from " + place;
        case EnablingFailure::GuardFalse: return t + " guard is false";
    }
    return t;
}

NotEnabledError::NotEnabledError(std::string transition, EnablingCheck check)
    : Error("not enabled: " + check.describe(transition)), transition_(std::move(transition)), check_(std::move(check)) {}

FiringSequenceError::FiringSequenceError(std::size_t step, std::string transition, EnablingCheck check, Trace prefix)
    : Error("step " + std::to_string(step) + ": " + check.describe(transition)),
      step_(step),
      transition_(std::move(transition)),
      check_(std::move(check)),
      prefix_(std::move(prefix)) {}

const Marking& Trace::final_marking() const {
    return events.empty() ? initial : events.back().marking_after;
}

namespace {

const Transition& lookup(const Net& net, std::string_view id) {
    auto index = net.transition_index(id);
    if (!index) throw UnknownTransitionError(std::string(id));
    return net.transitions[*index];
}

}  // namespace

EnablingCheck check_enabling(const Net& net, const Marking& m, std::string_view transition, const Environment& env,
                             ContainmentMode mode) {
    const Transition& t = lookup(net, transition);
    for (const auto& name : t.guard.variables()) {
        if (!env.contains(name)) throw UnboundVariableError(name);
    }

    bool has_input = false;
    for (const auto& arc : net.arcs) {
        if (arc.target != t.id) continue;
        has_input = true;
        const Multiset& tokens = m.at(arc.source);
        const bool callable = mode == ContainmentMode::Exact ? tokens == arc.weight : tokens.contains(arc.weight);
        if (tokens.empty() || !callable) return {EnablingFailure::TokensMissing, arc.source};
    }
    if (!has_input) return {EnablingFailure::NoInputArcs, {}};
    if (!eval_guard(t.guard, env)) return {EnablingFailure::GuardFalse, {}};
    return {};
}

bool enabled(const Net& net, const Marking& m, std::string_view transition, const Environment& env,
             ContainmentMode mode) {
    return check_enabling(net, m, transition, env, mode).enabled();
}

Marking fire(const Net& net, const Marking& m, std::string_view transition, const Environment& env,
             ContainmentMode mode) {
    auto check = check_enabling(net, m, transition, env, mode);
    if (!check.enabled()) throw NotEnabledError(std::string(transition), std::move(check));

    Marking out = m;
    for (const auto& arc : net.arcs) {
        if (arc.target == transition) out.remove(arc.source, arc.weight);
    }
    for (const auto& arc : net.arcs) {
        if (arc.source == transition) out.add(arc.target, arc.weight);
    }
    return out;
}

std::vector<std::string> enabled_set(const Net& net, const Marking& m, const Environment& env, ContainmentMode mode) {
    std::vector<std::string> out;
    for (const auto& t : net.transitions) {
        if (enabled(net, m, t.id, env, mode)) out.push_back(t.id);
    }
    return out;
}

Trace fire_sequence(const Net& net, const Marking& m0, const std::vector<std::string>& seq,
                    const std::vector<Environment>& envs, ContainmentMode mode) {
    if (seq.size() != envs.size()) {
        throw Error("firing sequence has " + std::to_string(seq.size()) + " transitions but " +
                    std::to_string(envs.size()) + " environments");
    }
    Trace trace{net.name, m0, {}};
    Marking current = m0;
    for (std::size_t k = 0; k < seq.size(); ++k) {
        auto check = check_enabling(net, current, seq[k], envs[k], mode);
        if (!check.enabled()) throw FiringSequenceError(k + 1, seq[k], std::move(check), std::move(trace));
        current = fire(net, current, seq[k], envs[k], mode);
        trace.events.push_back({k + 1, seq[k], envs[k], current});
    }
    return trace;
}

StepResult step(const Net& net, const Marking& m, const Environment& env, FiringPolicy policy, ContainmentMode mode) {
    StepResult result{m, {}, {}};
    for (const auto& t : net.transitions) {
        if (!enabled(net, result.marking, t.id, env, mode)) continue;
        result.marking = fire(net, result.marking, t.id, env, mode);
        result.fired.push_back(t.id);
        result.after.push_back(result.marking);
        if (policy == FiringPolicy::Single) break;
    }
    return result;
}

std::size_t replay_trace(const Net& net, const Trace& trace, ContainmentMode mode) {
    Marking current = trace.initial;
    for (std::size_t k = 0; k < trace.events.size(); ++k) {
        const auto& event = trace.events[k];
        current = fire(net, current, event.transition, event.env, mode);
        if (current != event.marking_after) return k;
    }
    return trace.events.size();
}

}  // namespace opn
