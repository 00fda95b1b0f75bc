#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "opn/error.hpp"
#include "opn/expr.hpp"
#include "opn/multiset.hpp"

namespace opn {

/// True for `[A-Za-z][A-Za-z0-9_]*`.
bool is_identifier(std::string_view text);

/// Direction in which tokens rotate around an orbit place. Stored and
/// reported; it does not take part in enabling or firing.
enum class Rotation : int { Clockwise = 1, Anticlockwise = -1 };

char rotation_symbol(Rotation r);

struct Place {
    std::string id;
    Rotation rotation = Rotation::Clockwise;

    friend bool operator==(const Place&, const Place&) = default;
};

struct Transition {
    std::string id;
    GuardExpr guard = GuardExpr::constant(true);

    friend bool operator==(const Transition&, const Transition&) = default;
};

/// Arc weights are positive formal sums of colors ("token callings").
using WeightExpr = Multiset;

struct Arc {
    std::string source;
    std::string target;
    WeightExpr weight;

    friend bool operator==(const Arc&, const Arc&) = default;
};

/// Assignment of a token multiset to each place. Places that are absent hold
/// the empty multiset; empty entries are never stored.
class Marking {
public:
    using Storage = std::map<std::string, Multiset>;

    Marking() = default;
    Marking(std::initializer_list<std::pair<const std::string, Multiset>> init);

    [[nodiscard]] const Multiset& at(const std::string& place) const;
    void set(const std::string& place, Multiset tokens);
    void add(const std::string& place, const Multiset& tokens);
    /// Returns false when `tokens` is not contained in the place.
    bool remove(const std::string& place, const Multiset& tokens);

    [[nodiscard]] Multiset::Count total() const;
    [[nodiscard]] bool empty() const { return places_.empty(); }
    [[nodiscard]] const Storage& places() const { return places_; }

    friend bool operator==(const Marking&, const Marking&) = default;
    friend auto operator<=>(const Marking&, const Marking&) = default;

private:
    Storage places_;
};

/// External scalar variables read by guards (`collision_prob`, `clock`,
/// `T1`, `eps`, ...). Values are finite.
class Environment {
public:
    Environment() = default;
    Environment(std::initializer_list<std::pair<const std::string, double>> init);

    /// Throws std::invalid_argument on a non-finite value.
    void set(const std::string& name, double value);
    [[nodiscard]] std::optional<double> get(const std::string& name) const;
    [[nodiscard]] bool contains(const std::string& name) const { return values_.contains(name); }

    /// Copy of `*this` with every binding of `overlay` applied on top.
    [[nodiscard]] Environment overlaid(const Environment& overlay) const;

    [[nodiscard]] const std::map<std::string, double>& values() const { return values_; }

    friend bool operator==(const Environment&, const Environment&) = default;

private:
    std::map<std::string, double> values_;
};

/// The seven-part orbital net: places with rotation signs, transitions with
/// guards, weighted arcs, the color set and the initial marking.
///
/// Declaration order of places and transitions is significant: it fixes the
/// row/column order of marking vectors and the incidence matrix, and the
/// order in which firing policies visit transitions.
struct Net {
    std::string name;
    std::vector<TokenColor> colors;
    std::vector<Place> places;
    std::vector<Transition> transitions;
    std::vector<Arc> arcs;
    Marking initial_marking;

    /// Number of orbit places.
    [[nodiscard]] std::size_t order() const { return places.size(); }

    [[nodiscard]] std::optional<std::size_t> place_index(std::string_view id) const;
    [[nodiscard]] std::optional<std::size_t> transition_index(std::string_view id) const;
    [[nodiscard]] bool has_color(std::string_view name) const;

    /// Weight of the arc `source -> target`, if declared.
    [[nodiscard]] const WeightExpr* arc_weight(std::string_view source, std::string_view target) const;

    friend bool operator==(const Net&, const Net&) = default;
};

struct Violation {
    std::string element;  // e.g. "arc P1 -> P2", "place P3", "marking P1"
    std::string rule;

    [[nodiscard]] std::string message() const { return element + ": " + rule; }
};

/// Returns every structural violation in `net`; empty iff the net is valid.
std::vector<Violation> validate_net(const Net& net);

/// Violations that apply to a marking alone (unknown places, foreign colors).
std::vector<Violation> validate_marking(const Net& net, const Marking& m, std::string_view label = "marking");

/// Entry j is the multiset at the j-th declared place. Throws opn::Error when
/// the marking names a place the net does not declare.
std::vector<Multiset> marking_vector(const Net& net, const Marking& m);

/// Inverse of marking_vector. `vec` must have one entry per place.
Marking marking_from_vector(const Net& net, const std::vector<Multiset>& vec);

}  // namespace opn
