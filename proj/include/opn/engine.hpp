#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "opn/net.hpp"

namespace opn {

/// How an input arc's token calling is matched against its place.
enum class ContainmentMode {
    Subset,  // called tokens must be contained in the place
    Exact,   // the place must hold exactly the called tokens
};

enum class FiringPolicy {
    Sweep,   // fire every enabled transition once, in declaration order
    Single,  // fire only the first enabled transition
};

std::string_view to_string(ContainmentMode mode);
std::string_view to_string(FiringPolicy policy);
/// Throws opn::Error on an unrecognised name.
ContainmentMode parse_containment_mode(std::string_view text);
FiringPolicy parse_firing_policy(std::string_view text);

/// Which enabling condition failed.
enum class EnablingFailure {
    None,
    NoInputArcs,     // (a)
    TokensMissing,   // (b)
    GuardFalse,      // (c)
};

struct EnablingCheck {
    EnablingFailure failure = EnablingFailure::None;
    std::string place;  // offending input place when failure == TokensMissing

    [[nodiscard]] bool enabled() const { return failure == EnablingFailure::None; }
    [[nodiscard]] std::string describe(std::string_view transition) const;
};

class UnknownTransitionError : public Error {
public:
    explicit UnknownTransitionError(const std::string& id) : Error("unknown transition '" + id + "'"), id_(id) {}
    [[nodiscard]] const std::string& id() const { return id_; }

private:
    std::string id_;
};

class NotEnabledError : public Error {
public:
    NotEnabledError(std::string transition, EnablingCheck check);
    [[nodiscard]] const std::string& transition() const { return transition_; }
    [[nodiscard]] const EnablingCheck& check() const { return check_; }

private:
    std::string transition_;
    EnablingCheck check_;
};

struct FiringEvent {
    std::size_t step = 0;
    std::string transition;
    Environment env;
    Marking marking_after;

    friend bool operator==(const FiringEvent&, const FiringEvent&) = default;
};

struct Trace {
    std::string net_name;
    Marking initial;
    std::vector<FiringEvent> events;

    /// Marking after the last event, or `initial` for an empty trace.
    [[nodiscard]] const Marking& final_marking() const;

    friend bool operator==(const Trace&, const Trace&) = default;
};

/// A firing sequence stopped at a transition that was not enabled. The
/// partial trace holds every firing that succeeded before it.
class FiringSequenceError : public Error {
public:
    FiringSequenceError(std::size_t step, std::string transition, EnablingCheck check, Trace prefix);
    [[nodiscard]] std::size_t step() const { return step_; }
    [[nodiscard]] const std::string& transition() const { return transition_; }
    [[nodiscard]] const EnablingCheck& check() const { return check_; }
    [[nodiscard]] const Trace& prefix() const { return prefix_; }

private:
    std::size_t step_;
    std::string transition_;
    EnablingCheck check_;
    Trace prefix_;
};

/// Evaluates the three enabling conditions in order: at least one input arc,
/// every input arc's calling satisfiable at its place, and the guard. All
/// guard variables must be bound even when an earlier condition fails.
EnablingCheck check_enabling(const Net& net, const Marking& m, std::string_view transition, const Environment& env,
                             ContainmentMode mode = ContainmentMode::Subset);

bool enabled(const Net& net, const Marking& m, std::string_view transition, const Environment& env,
             ContainmentMode mode = ContainmentMode::Subset);

/// Moves the called tokens from the input places to the output places. A
/// transition without output arcs consumes what it calls.
Marking fire(const Net& net, const Marking& m, std::string_view transition, const Environment& env,
             ContainmentMode mode = ContainmentMode::Subset);

/// Enabled transitions in declaration order.
std::vector<std::string> enabled_set(const Net& net, const Marking& m, const Environment& env,
                                     ContainmentMode mode = ContainmentMode::Subset);

/// Fires `seq[k]` against `envs[k]`. Event steps are numbered from 1.
Trace fire_sequence(const Net& net, const Marking& m0, const std::vector<std::string>& seq,
                    const std::vector<Environment>& envs, ContainmentMode mode = ContainmentMode::Subset);

struct StepResult {
    Marking marking;
    std::vector<std::string> fired;
    std::vector<Marking> after;  // marking after each entry of `fired`
};

/// One simulation step. Under Sweep, enabling is re-checked against the
/// intermediate marking before each firing.
StepResult step(const Net& net, const Marking& m, const Environment& env, FiringPolicy policy = FiringPolicy::Sweep,
                ContainmentMode mode = ContainmentMode::Subset);

/// Replays `trace` from its initial marking, firing each event with its own
/// environment snapshot. Returns the index of the first event whose recorded
/// marking differs from the replayed one, or events.size() when all match.
/// Throws NotEnabledError if an event cannot fire.
std::size_t replay_trace(const Net& net, const Trace& trace, ContainmentMode mode = ContainmentMode::Subset);

}  // namespace opn
