#include "opn/net.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace opn {

bool is_identifier(std::string_view text) {
    if (text.empty()) return false;
    auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(text.front())) return false;
    return std::all_of(text.begin() + 1, text.end(), [&](char c) { return alpha(c) || digit(c) || c == '_'; });
}

char rotation_symbol(Rotation r) {
    switch (r) {
        case Rotation::Clockwise: return '+';
        case Rotation::Anticlockwise: return '-';
    }
    return '?';
}

// --- Marking ----------------------------------------------------------------

Marking::Marking(std::initializer_list<std::pair<const std::string, Multiset>> init) {
    for (const auto& [place, tokens] : init) add(place, tokens);
}

const Multiset& Marking::at(const std::string& place) const {
    static const Multiset empty;
    auto it = places_.find(place);
    return it == places_.end() ? empty : it->second;
}

void Marking::set(const std::string& place, Multiset tokens) {
    if (tokens.empty()) {
        places_.erase(place);
    } else {
        places_[place] = std::move(tokens);
    }
}

void Marking::add(const std::string& place, const Multiset& tokens) {
    if (tokens.empty()) return;
    places_[place].add(tokens);
}

bool Marking::remove(const std::string& place, const Multiset& tokens) {
    if (tokens.empty()) return true;
    auto it = places_.find(place);
    if (it == places_.end() || !it->second.remove(tokens)) return false;
    if (it->second.empty()) places_.erase(it);
    return true;
}

Multiset::Count Marking::total() const {
    Multiset::Count sum = 0;
    for (const auto& [place, tokens] : places_) sum += tokens.total();
    return sum;
}

// --- Environment --------------------------------------------------------------

Environment::Environment(std::initializer_list<std::pair<const std::string, double>> init) {
    for (const auto& [name, value] : init) set(name, value);
}

void Environment::set(const std::string& name, double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("environment variable " + name + " must be finite");
    values_[name] = value;
}

std::optional<double> Environment::get(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

Environment Environment::overlaid(const Environment& overlay) const {
    Environment out = *this;
    for (const auto& [name, value] : overlay.values_) out.values_[name] = value;
    return out;
}

// --- Net --------------------------------------------------------------------

std::optional<std::size_t> Net::place_index(std::string_view id) const {
    for (std::size_t i = 0; i < places.size(); ++i) {
        if (places[i].id == id) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> Net::transition_index(std::string_view id) const {
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        if (transitions[i].id == id) return i;
    }
    return std::nullopt;
}

bool Net::has_color(std::string_view name) const {
    return std::any_of(colors.begin(), colors.end(), [&](const TokenColor& c) { return c.name == name; });
}

const WeightExpr* Net::arc_weight(std::string_view source, std::string_view target) const {
    for (const auto& arc : arcs) {
        if (arc.source == source && arc.target == target) return &arc.weight;
    }
    return nullptr;
}

namespace {

void check_colors_of(const Net& net, const Multiset& ms, const std::string& element, std::vector<Violation>& out) {
    for (const auto& [color, n] : ms) {
        if (!net.has_color(color)) out.push_back({element, "color '" + color + "' is not in the color set"});
    }
}

}  // namespace

std::vector<Violation> validate_marking(const Net& net, const Marking& m, std::string_view label) {
    std::vector<Violation> out;
    for (const auto& [place, tokens] : m.places()) {
        const std::string element = std::string(label) + " " + place;
        if (!net.place_index(place)) out.push_back({element, "place '" + place + "' is not declared"});
        check_colors_of(net, tokens, element, out);
    }
    return out;
}

std::vector<Violation> validate_net(const Net& net) {
    std::vector<Violation> out;

    std::set<std::string> seen_colors;
    for (const auto& color : net.colors) {
        const std::string element = "color " + color.name;
        if (!is_identifier(color.name)) out.push_back({element, "name is not an identifier"});
        if (!seen_colors.insert(color.name).second) out.push_back({element, "declared more than once"});
    }

    std::set<std::string> seen_places;
    for (const auto& place : net.places) {
        const std::string element = "place " + place.id;
        if (!is_identifier(place.id)) out.push_back({element, "id is not an identifier"});
        if (!seen_places.insert(place.id).second) out.push_back({element, "declared more than once"});
        if (place.rotation != Rotation::Clockwise && place.rotation != Rotation::Anticlockwise) {
            out.push_back({element, "rotation must be +1 or -1"});
        }
    }

    std::set<std::string> seen_transitions;
    for (const auto& transition : net.transitions) {
        const std::string element = "transition " + transition.id;
        if (!is_identifier(transition.id)) out.push_back({element, "id is not an identifier"});
        if (seen_places.contains(transition.id)) out.push_back({element, "id is also used by a place"});
        if (!seen_transitions.insert(transition.id).second) out.push_back({element, "declared more than once"});
    }

    std::set<std::pair<std::string, std::string>> seen_arcs;
    for (const auto& arc : net.arcs) {
        const std::string element = "arc " + arc.source + " -> " + arc.target;
        const bool src_place = seen_places.contains(arc.source);
        const bool src_trans = seen_transitions.contains(arc.source);
        const bool dst_place = seen_places.contains(arc.target);
        const bool dst_trans = seen_transitions.contains(arc.target);
        if (!src_place && !src_trans) out.push_back({element, "source '" + arc.source + "' is not declared"});
        if (!dst_place && !dst_trans) out.push_back({element, "target '" + arc.target + "' is not declared"});
        if ((src_place && dst_place) || (src_trans && dst_trans)) {
            out.push_back({element, "arc must connect a place and a transition"});
        }
        if (!seen_arcs.emplace(arc.source, arc.target).second) out.push_back({element, "declared more than once"});
        if (arc.weight.empty()) out.push_back({element, "weight expression is empty"});
        check_colors_of(net, arc.weight, element, out);
    }

    auto marking = validate_marking(net, net.initial_marking, "marking");
    out.insert(out.end(), marking.begin(), marking.end());
    return out;
}

std::vector<Multiset> marking_vector(const Net& net, const Marking& m) {
    for (const auto& [place, tokens] : m.places()) {
        if (!net.place_index(place)) throw Error("marking names undeclared place '" + place + "'");
    }
    std::vector<Multiset> vec;
    vec.reserve(net.places.size());
    for (const auto& place : net.places) vec.push_back(m.at(place.id));
    return vec;
}

Marking marking_from_vector(const Net& net, const std::vector<Multiset>& vec) {
    if (vec.size() != net.places.size()) {
        throw std::invalid_argument("marking vector has " + std::to_string(vec.size()) + " entries, net has " +
                                    std::to_string(net.places.size()) + " places");
    }
    Marking m;
    for (std::size_t j = 0; j < vec.size(); ++j) m.set(net.places[j].id, vec[j]);
    return m;
}

}  // namespace opn
