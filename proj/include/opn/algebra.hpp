#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opn/engine.hpp"
#include "opn/net.hpp"

namespace opn {

/// Formal integer combination of colors, e.g. `y-x` or `A+C`. Zero
/// coefficients are never stored, so the representation is canonical and
/// the empty value is the group identity.
class SignedMultiset {
public:
    using Coefficient = std::int64_t;
    using Storage = std::map<std::string, Coefficient>;

    SignedMultiset() = default;
    SignedMultiset(std::initializer_list<std::pair<const std::string, Coefficient>> init);
    explicit SignedMultiset(const Multiset& ms);

    [[nodiscard]] Coefficient coefficient(const std::string& color) const;
    void add(const std::string& color, Coefficient c);

    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] bool is_nonnegative() const;
    [[nodiscard]] const Storage& terms() const { return terms_; }

    /// Converts back to a multiset; nullopt when a coefficient is negative.
    [[nodiscard]] std::optional<Multiset> to_multiset() const;

    SignedMultiset& operator+=(const SignedMultiset& rhs);
    SignedMultiset& operator-=(const SignedMultiset& rhs);
    SignedMultiset& operator*=(Coefficient k);
    friend SignedMultiset operator+(SignedMultiset a, const SignedMultiset& b) { return a += b; }
    friend SignedMultiset operator-(SignedMultiset a, const SignedMultiset& b) { return a -= b; }
    friend SignedMultiset operator*(SignedMultiset a, Coefficient k) { return a *= k; }
    SignedMultiset operator-() const;

    friend bool operator==(const SignedMultiset&, const SignedMultiset&) = default;
    friend auto operator<=>(const SignedMultiset&, const SignedMultiset&) = default;

private:
    Storage terms_;
};

/// Positive terms first, then negative terms, each group in color-name
/// order; unit coefficients omitted; zero renders as "0". Examples: "y-x",
/// "A+C", "-D", "2y-3x".
std::string render_signed(const SignedMultiset& s);

/// Places x transitions; entry (j, i) is the change in place j caused by one
/// firing of transition i.
struct IncidenceMatrix {
    std::vector<std::string> places;
    std::vector<std::string> transitions;
    std::vector<std::vector<SignedMultiset>> entries;  // [place][transition]

    [[nodiscard]] const SignedMultiset& at(std::size_t place, std::size_t transition) const {
        return entries[place][transition];
    }
    [[nodiscard]] std::size_t rows() const { return places.size(); }
    [[nodiscard]] std::size_t cols() const { return transitions.size(); }

    friend bool operator==(const IncidenceMatrix&, const IncidenceMatrix&) = default;
};

/// Aligned text grid: header row of transition ids, one row per place.
std::string render_grid(const IncidenceMatrix& a);

/// Nonnegative firing count per transition, in declaration order.
struct FiringCountVector {
    std::vector<std::uint64_t> counts;

    [[nodiscard]] std::uint64_t total() const;
    friend bool operator==(const FiringCountVector&, const FiringCountVector&) = default;
    friend auto operator<=>(const FiringCountVector&, const FiringCountVector&) = default;
};

std::string render_counts(const FiringCountVector& x);  // "(1, 1, 0)"

/// The state update produced a negative coefficient, so the result is not a
/// marking.
class InfeasibleMarkingError : public Error {
public:
    InfeasibleMarkingError(std::string place, SignedMultiset value);
    [[nodiscard]] const std::string& place() const { return place_; }
    [[nodiscard]] const SignedMultiset& value() const { return value_; }

private:
    std::string place_;
    SignedMultiset value_;
};

IncidenceMatrix incidence_matrix(const Net& net);

/// Signed marking vector, one entry per declared place.
std::vector<SignedMultiset> signed_vector(const Net& net, const Marking& m);

/// M + A u in signed-multiset arithmetic. `u` must have one entry per
/// transition.
std::vector<SignedMultiset> state_update(const IncidenceMatrix& a, const std::vector<SignedMultiset>& m,
                                         const FiringCountVector& u);

/// M + A u converted back to a marking. Throws InfeasibleMarkingError when a
/// coefficient goes negative.
Marking apply_state_equation(const Net& net, const Marking& m, const FiringCountVector& u);

/// Lexicographically least X >= 0 with sum(X) <= max_total_firings and
/// md - m0 = A X, found by exhaustive enumeration. Guards are ignored. A
/// witness establishes the necessary condition for reachability only.
std::optional<FiringCountVector> check_reachability_condition(const Net& net, const Marking& m0, const Marking& md,
                                                              std::uint64_t max_total_firings);

/// Per-transition firing counts of a trace. Throws UnknownTransitionError.
FiringCountVector firing_counts(const Net& net, const Trace& trace);

/// True iff the trace's final marking equals the state equation applied to
/// its initial marking and firing counts.
bool verify_sequence_consistency(const Net& net, const Trace& trace);

struct ReachabilityEdge {
    std::size_t from;
    std::size_t to;
    std::string transition;

    friend bool operator==(const ReachabilityEdge&, const ReachabilityEdge&) = default;
};

struct ReachabilityGraph {
    std::vector<Marking> nodes;        // breadth-first discovery order; nodes[0] is m0
    std::vector<std::size_t> depth;    // BFS depth of each node
    std::vector<bool> deadlock;        // no transition enabled at the node
    std::vector<ReachabilityEdge> edges;
    bool truncated = false;            // some successor was dropped by a bound

    [[nodiscard]] std::optional<std::size_t> find(const Marking& m) const;
};

/// Breadth-first closure of m0 under single firings with `env` fixed. New
/// nodes are only added below max_depth and up to max_states; edges between
/// known nodes are always recorded.
ReachabilityGraph reachability_graph(const Net& net, const Marking& m0, const Environment& env, std::size_t max_depth,
                                     std::size_t max_states, ContainmentMode mode = ContainmentMode::Subset);

}  // namespace opn
