#include "opn/algebra.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace opn {

// --- SignedMultiset -------------------------------------------------------------

SignedMultiset::SignedMultiset(std::initializer_list<std::pair<const std::string, Coefficient>> init) {
    for (const auto& [color, c] : init) add(color, c);
}

SignedMultiset::SignedMultiset(const Multiset& ms) {
    for (const auto& [color, n] : ms) terms_.emplace(color, n);
}

SignedMultiset::Coefficient SignedMultiset::coefficient(const std::string& color) const {
    auto it = terms_.find(color);
    return it == terms_.end() ? 0 : it->second;
}

void SignedMultiset::add(const std::string& color, Coefficient c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(color, 0);
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

bool SignedMultiset::is_nonnegative() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second > 0; });
}

std::optional<Multiset> SignedMultiset::to_multiset() const {
    if (!is_nonnegative()) return std::nullopt;
    Multiset out;
    for (const auto& [color, c] : terms_) out.add(color, c);
    return out;
}

SignedMultiset& SignedMultiset::operator+=(const SignedMultiset& rhs) {
    for (const auto& [color, c] : rhs.terms_) add(color, c);
    return *this;
}

SignedMultiset& SignedMultiset::operator-=(const SignedMultiset& rhs) {
    for (const auto& [color, c] : rhs.terms_) add(color, -c);
    return *this;
}

SignedMultiset& SignedMultiset::operator*=(Coefficient k) {
    if (k == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [color, c] : terms_) c *= k;
    return *this;
}

SignedMultiset SignedMultiset::operator-() const {
    SignedMultiset out = *this;
    out *= -1;
    return out;
}

std::string render_signed(const SignedMultiset& s) {
    if (s.is_zero()) return "0";
    std::string out;
    auto term = [&](const std::string& color, SignedMultiset::Coefficient c) {
        const auto magnitude = c < 0 ? -c : c;
        if (c < 0) {
            out += '-';
        } else if (!out.empty()) {
            out += '+';
        }
        if (magnitude != 1) out += std::to_string(magnitude);
        out += color;
    };
    for (const auto& [color, c] : s.terms()) {
        if (c > 0) term(color, c);
    }
    for (const auto& [color, c] : s.terms()) {
        if (c < 0) term(color, c);
    }
    return out;
}

// --- matrix -------------------------------------------------------------------

std::string render_grid(const IncidenceMatrix& a) {
    std::vector<std::vector<std::string>> cells;
    cells.emplace_back();
    cells.back().emplace_back("");
    for (const auto& t : a.transitions) cells.back().push_back(t);
    for (std::size_t j = 0; j < a.rows(); ++j) {
        cells.emplace_back();
        cells.back().push_back(a.places[j]);
        for (std::size_t i = 0; i < a.cols(); ++i) cells.back().push_back(render_signed(a.at(j, i)));
    }

    std::vector<std::size_t> width(a.cols() + 1, 0);
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }

    std::string out;
    for (const auto& row : cells) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c == 0) {
                line += row[c] + std::string(width[c] - row[c].size(), ' ');
            } else {
                line += "  " + std::string(width[c] - row[c].size(), ' ') + row[c];
            }
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + '\n';
    }
    return out;
}

std::uint64_t FiringCountVector::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::string render_counts(const FiringCountVector& x) {
    std::string out = "(";
    for (std::size_t i = 0; i < x.counts.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(x.counts[i]);
    }
    return out + ")";
}

InfeasibleMarkingError::InfeasibleMarkingError(std::string place, SignedMultiset value)
    : Error("state equation yields " + render_signed(value) + " at place " + place + ", which is not a marking"),
      place_(std::move(place)),
      value_(std::move(value)) {}

IncidenceMatrix incidence_matrix(const Net& net) {
    IncidenceMatrix a;
    for (const auto& p : net.places) a.places.push_back(p.id);
    for (const auto& t : net.transitions) a.transitions.push_back(t.id);
    a.entries.assign(a.rows(), std::vector<SignedMultiset>(a.cols()));
    for (const auto& arc : net.arcs) {
        if (auto j = net.place_index(arc.source)) {
            if (auto i = net.transition_index(arc.target)) a.entries[*j][*i] -= SignedMultiset(arc.weight);
        } else if (auto j = net.place_index(arc.target)) {
            if (auto i = net.transition_index(arc.source)) a.entries[*j][*i] += SignedMultiset(arc.weight);
        }
    }
    return a;
}

std::vector<SignedMultiset> signed_vector(const Net& net, const Marking& m) {
    std::vector<SignedMultiset> out;
    for (const auto& ms : marking_vector(net, m)) out.emplace_back(ms);
    return out;
}

std::vector<SignedMultiset> state_update(const IncidenceMatrix& a, const std::vector<SignedMultiset>& m,
                                         const FiringCountVector& u) {
    if (u.counts.size() != a.cols()) {
        throw Error("firing count vector has " + std::to_string(u.counts.size()) + " entries, matrix has " +
                    std::to_string(a.cols()) + " columns");
    }
    if (m.size() != a.rows()) throw Error("marking vector does not match matrix rows");
    std::vector<SignedMultiset> out = m;
    for (std::size_t j = 0; j < a.rows(); ++j) {
        for (std::size_t i = 0; i < a.cols(); ++i) {
            out[j] += a.at(j, i) * static_cast<SignedMultiset::Coefficient>(u.counts[i]);
        }
    }
    return out;
}

Marking apply_state_equation(const Net& net, const Marking& m, const FiringCountVector& u) {
    const auto result = state_update(incidence_matrix(net), signed_vector(net, m), u);
    Marking out;
    for (std::size_t j = 0; j < result.size(); ++j) {
        auto ms = result[j].to_multiset();
        if (!ms) throw InfeasibleMarkingError(net.places[j].id, result[j]);
        out.set(net.places[j].id, std::move(*ms));
    }
    return out;
}

namespace {

// Dense integer view of the symbolic system: one coordinate per
// (place, color) pair that occurs anywhere.
struct DenseSystem {
    std::vector<std::vector<std::int64_t>> columns;  // [transition][coordinate]
    std::vector<std::int64_t> delta;
};

DenseSystem densify(const IncidenceMatrix& a, const std::vector<SignedMultiset>& delta) {
    std::set<std::string> colors;
    for (const auto& row : a.entries) {
        for (const auto& entry : row) {
            for (const auto& [color, c] : entry.terms()) colors.insert(color);
        }
    }
    for (const auto& entry : delta) {
        for (const auto& [color, c] : entry.terms()) colors.insert(color);
    }

    DenseSystem dense;
    dense.columns.assign(a.cols(), {});
    for (std::size_t j = 0; j < a.rows(); ++j) {
        for (const auto& color : colors) {
            for (std::size_t i = 0; i < a.cols(); ++i) dense.columns[i].push_back(a.at(j, i).coefficient(color));
            dense.delta.push_back(delta[j].coefficient(color));
        }
    }
    return dense;
}

bool search_witness(const DenseSystem& sys, std::size_t index, std::uint64_t remaining,
                    std::vector<std::int64_t>& residual, std::vector<std::uint64_t>& x) {
    if (index == sys.columns.size()) {
        return std::all_of(residual.begin(), residual.end(), [](std::int64_t r) { return r == 0; });
    }
    const auto& column = sys.columns[index];
    std::uint64_t k = 0;
    while (true) {
        x[index] = k;
        if (search_witness(sys, index + 1, remaining - k, residual, x)) return true;
        if (k == remaining) break;
        ++k;
        for (std::size_t c = 0; c < residual.size(); ++c) residual[c] -= column[c];
    }
    for (std::size_t c = 0; c < residual.size(); ++c) residual[c] += static_cast<std::int64_t>(k) * column[c];
    x[index] = 0;
    return false;
}

}  // namespace

std::optional<FiringCountVector> check_reachability_condition(const Net& net, const Marking& m0, const Marking& md,
                                                              std::uint64_t max_total_firings) {
    const auto a = incidence_matrix(net);
    const auto from = signed_vector(net, m0);
    const auto to = signed_vector(net, md);
    std::vector<SignedMultiset> delta(from.size());
    for (std::size_t j = 0; j < from.size(); ++j) delta[j] = to[j] - from[j];

    const auto sys = densify(a, delta);
    std::vector<std::int64_t> residual = sys.delta;
    std::vector<std::uint64_t> x(a.cols(), 0);
    if (!search_witness(sys, 0, max_total_firings, residual, x)) return std::nullopt;
    return FiringCountVector{x};
}

FiringCountVector firing_counts(const Net& net, const Trace& trace) {
    FiringCountVector counts{std::vector<std::uint64_t>(net.transitions.size(), 0)};
    for (const auto& event : trace.events) {
        auto i = net.transition_index(event.transition);
        if (!i) throw UnknownTransitionError(event.transition);
        ++counts.counts[*i];
    }
    return counts;
}

bool verify_sequence_consistency(const Net& net, const Trace& trace) {
    const auto counts = firing_counts(net, trace);
    try {
        return apply_state_equation(net, trace.initial, counts) == trace.final_marking();
    } catch (const InfeasibleMarkingError&) {
        return false;
    }
}

// --- reachability graph -------------------------------------------------------------

std::optional<std::size_t> ReachabilityGraph::find(const Marking& m) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] == m) return i;
    }
    return std::nullopt;
}

ReachabilityGraph reachability_graph(const Net& net, const Marking& m0, const Environment& env, std::size_t max_depth,
                                     std::size_t max_states, ContainmentMode mode) {
    ReachabilityGraph g;
    std::map<Marking, std::size_t> index;
    g.nodes.push_back(m0);
    g.depth.push_back(0);
    g.deadlock.push_back(false);
    index.emplace(m0, 0);

    for (std::size_t current = 0; current < g.nodes.size(); ++current) {
        const Marking m = g.nodes[current];
        const auto fireable = enabled_set(net, m, env, mode);
        g.deadlock[current] = fireable.empty();
        for (const auto& t : fireable) {
            Marking next = fire(net, m, t, env, mode);
            auto it = index.find(next);
            if (it == index.end()) {
                if (g.depth[current] >= max_depth || g.nodes.size() >= max_states) {
                    g.truncated = true;
                    continue;
                }
                it = index.emplace(next, g.nodes.size()).first;
                g.nodes.push_back(std::move(next));
                g.depth.push_back(g.depth[current] + 1);
                g.deadlock.push_back(false);
            }
            g.edges.push_back({current, it->second, t});
        }
    }
    return g;
}

}  // namespace opn
