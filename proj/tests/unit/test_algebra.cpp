#include <doctest.h>

#include <random>

#include "opn/algebra.hpp"
#include "support/oracles.hpp"
#include "support/reference_nets.hpp"

using namespace opn;
using opn::testing::ms;

namespace {

const Environment kNoVars;

SignedMultiset sm(std::initializer_list<std::pair<const std::string, SignedMultiset::Coefficient>> init) {
    return SignedMultiset(init);
}

std::vector<std::vector<std::string>> rendered(const IncidenceMatrix& a) {
    std::vector<std::vector<std::string>> out;
    for (const auto& row : a.entries) {
        std::vector<std::string> r;
        for (const auto& e : row) r.push_back(render_signed(e));
        out.push_back(r);
    }
    return out;
}

Trace random_run(const Net& net, std::mt19937_64& rng, std::size_t max_len) {
    std::vector<std::string> seq;
    Marking m = net.initial_marking;
    const std::size_t len = std::uniform_int_distribution<std::size_t>(0, max_len)(rng);
    for (std::size_t k = 0; k < len; ++k) {
        auto fireable = enabled_set(net, m, kNoVars);
        if (fireable.empty()) break;
        seq.push_back(fireable[std::uniform_int_distribution<std::size_t>(0, fireable.size() - 1)(rng)]);
        m = fire(net, m, seq.back(), kNoVars);
    }
    return fire_sequence(net, net.initial_marking, seq, std::vector<Environment>(seq.size()));
}

}  // namespace

TEST_CASE("signed multiset arithmetic and rendering") {
    auto a = sm({{"x", 1}, {"y", -2}});
    auto b = sm({{"y", 2}, {"z", 3}});
    CHECK(a + b == sm({{"x", 1}, {"z", 3}}));
    CHECK((a - a).is_zero());
    CHECK(-a == sm({{"x", -1}, {"y", 2}}));
    CHECK(a * 0 == SignedMultiset{});
    CHECK(a * -2 == sm({{"x", -2}, {"y", 4}}));
    CHECK_FALSE(a.is_nonnegative());
    CHECK(b.to_multiset() == Multiset{{{"y", 2}, {"z", 3}}});
    CHECK_FALSE(a.to_multiset().has_value());

    CHECK(render_signed(sm({{"x", -1}, {"y", 1}})) == "y-x");
    CHECK(render_signed(sm({{"A", 1}, {"C", 1}})) == "A+C");
    CHECK(render_signed(sm({{"D", -1}})) == "-D");
    CHECK(render_signed(sm({{"x", -3}, {"y", 2}})) == "2y-3x");
    CHECK(render_signed({}) == "0");
}

TEST_CASE("signed multiset group laws") {
    std::mt19937_64 rng(7);
    auto random_sm = [&] {
        SignedMultiset s;
        for (const char* c : {"a", "b", "c"}) s.add(c, std::uniform_int_distribution<int>(-3, 3)(rng));
        return s;
    };
    for (int n = 0; n < 500; ++n) {
        auto a = random_sm(), b = random_sm(), c = random_sm();
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a + SignedMultiset{} == a);
        CHECK((a + -a).is_zero());
        CHECK((a + b) * 3 == a * 3 + b * 3);
        for (const auto& [color, k] : a.terms()) CHECK(k != 0);
    }
}

TEST_CASE("incidence matrix of the classification net") {
    auto a = incidence_matrix(testing::fig6_net());
    CHECK(a.places == std::vector<std::string>{"P1", "P2", "P3", "P4", "P5", "P6"});
    CHECK(a.transitions == std::vector<std::string>{"t1", "t2"});
    CHECK(rendered(a) == std::vector<std::vector<std::string>>{
                             {"-A", "0"}, {"0", "-B"}, {"-C", "0"}, {"0", "-D"}, {"A+C", "0"}, {"0", "B+D"}});
}

TEST_CASE("incidence matrix of the satellite nets") {
    CHECK(rendered(incidence_matrix(testing::fig7_net())) ==
          std::vector<std::vector<std::string>>{{"y-x", "x-y"}, {"x-y", "y-x"}});
    CHECK(rendered(incidence_matrix(testing::fig5_net())) == std::vector<std::vector<std::string>>{{"y-x"}, {"x-y"}});
    CHECK(rendered(incidence_matrix(testing::fig9_net())) ==
          std::vector<std::vector<std::string>>{{"-S", "S", "0"}, {"-D", "0", "0"}, {"S", "-S", "0"}, {"D", "0", "-D"}});
}

TEST_CASE("incidence matrix without arcs is all zero") {
    Net net;
    net.colors = {{"x"}};
    net.places = {{"P1"}, {"P2"}};
    net.transitions = {{"t1"}};
    auto a = incidence_matrix(net);
    CHECK(a.rows() == 2);
    CHECK(a.cols() == 1);
    CHECK(a.at(0, 0).is_zero());
    CHECK(a.at(1, 0).is_zero());
}

TEST_CASE("grid rendering") {
    CHECK(render_grid(incidence_matrix(testing::fig7_net())) ==
          "     t1   t2\n"
          "P1  y-x  x-y\n"
          "P2  x-y  y-x\n");
}

TEST_CASE("state equation") {
    auto fig6 = testing::fig6_net();
    CHECK(apply_state_equation(fig6, fig6.initial_marking, {{1, 1}}) ==
          Marking{{"P5", ms({"A", "C"})}, {"P6", ms({"B", "D"})}});
    CHECK(apply_state_equation(fig6, fig6.initial_marking, {{0, 0}}) == fig6.initial_marking);

    auto fig7 = testing::fig7_net();
    Marking swapped = {{"P1", ms({"y"})}, {"P2", ms({"x"})}};
    CHECK(apply_state_equation(fig7, fig7.initial_marking, {{1, 0}}) == swapped);
    CHECK(apply_state_equation(fig7, swapped, {{0, 1}}) == fig7.initial_marking);
    CHECK(apply_state_equation(fig7, fig7.initial_marking, {{1, 1}}) == fig7.initial_marking);

    auto fig9 = testing::fig9_net();
    CHECK(apply_state_equation(fig9, fig9.initial_marking, {{1, 1, 1}}) == Marking{{"P1", ms({"S"})}});

    try {
        apply_state_equation(fig6, fig6.initial_marking, {{2, 0}});
        FAIL("expected InfeasibleMarkingError");
    } catch (const InfeasibleMarkingError& e) {
        CHECK(e.place() == "P1");
        CHECK(render_signed(e.value()) == "-A");
    }
    CHECK_THROWS_AS(apply_state_equation(fig6, fig6.initial_marking, {{1}}), Error);
}

TEST_CASE("reachability witnesses") {
    auto fig6 = testing::fig6_net();
    Marking m1 = {{"P5", ms({"A", "C"})}, {"P6", ms({"B", "D"})}};
    auto x6 = check_reachability_condition(fig6, fig6.initial_marking, m1, 4);
    REQUIRE(x6);
    CHECK(render_counts(*x6) == "(1, 1)");
    CHECK_FALSE(check_reachability_condition(fig6, fig6.initial_marking, m1, 1));

    auto fig7 = testing::fig7_net();
    auto x7 = check_reachability_condition(fig7, fig7.initial_marking, fig7.initial_marking, 4);
    REQUIRE(x7);
    CHECK(x7->counts == testing::oracle_witness(fig7, fig7.initial_marking, fig7.initial_marking, 4));
    CHECK(render_counts(*x7) == "(0, 0)");

    auto fig9 = testing::fig9_net();
    auto x9 = check_reachability_condition(fig9, fig9.initial_marking, Marking{{"P1", ms({"S"})}}, 3);
    REQUIRE(x9);
    CHECK(render_counts(*x9) == "(1, 1, 1)");

    // Tokens of a color the net cannot produce.
    CHECK_FALSE(check_reachability_condition(fig9, fig9.initial_marking, Marking{{"P1", ms({"D"})}}, 5));
}

TEST_CASE("witnesses agree with brute force on random nets") {
    std::mt19937_64 rng(11);
    for (int n = 0; n < 200; ++n) {
        auto net = testing::random_net(rng, 4, 3, 3);
        auto trace = random_run(net, rng, 4);
        const auto& md = trace.final_marking();
        for (std::uint64_t bound : {0u, 2u, 4u}) {
            auto got = check_reachability_condition(net, net.initial_marking, md, bound);
            auto want = testing::oracle_witness(net, net.initial_marking, md, bound);
            REQUIRE(got.has_value() == want.has_value());
            if (got) CHECK(got->counts == *want);
        }
    }
}

TEST_CASE("firing counts and sequence consistency") {
    auto fig7 = testing::fig7_net();
    Environment env = {{"collision_prob", 0.5}, {"clock", 5}, {"T1", 5}, {"eps", 1}};
    auto trace = fire_sequence(fig7, fig7.initial_marking, {"t1", "t2"}, {env, env});
    CHECK(firing_counts(fig7, trace) == FiringCountVector{{1, 1}});
    CHECK(verify_sequence_consistency(fig7, trace));

    auto tampered = trace;
    tampered.events.back().marking_after = Marking{{"P1", ms({"y"})}, {"P2", ms({"x"})}};
    CHECK_FALSE(verify_sequence_consistency(fig7, tampered));

    tampered.events.back().transition = "t7";
    CHECK_THROWS_AS(firing_counts(fig7, tampered), UnknownTransitionError);
}

TEST_CASE("columns of the incidence matrix are the firing deltas") {
    std::mt19937_64 rng(5);
    for (int n = 0; n < 300; ++n) {
        auto net = testing::random_net(rng);
        auto a = incidence_matrix(net);
        auto m = signed_vector(net, net.initial_marking);
        for (std::size_t i = 0; i < net.transitions.size(); ++i) {
            if (!enabled(net, net.initial_marking, net.transitions[i].id, kNoVars)) continue;
            auto after = fire(net, net.initial_marking, net.transitions[i].id, kNoVars);
            FiringCountVector u{std::vector<std::uint64_t>(net.transitions.size(), 0)};
            u.counts[i] = 1;
            CHECK(state_update(a, m, u) == signed_vector(net, after));
        }
        auto trace = random_run(net, rng, 6);
        CHECK(verify_sequence_consistency(net, trace));
    }
}

TEST_CASE("reachability graph of the swap net") {
    auto fig5 = testing::fig5_net();
    auto g = reachability_graph(fig5, fig5.initial_marking, kNoVars, 3, 1000);
    REQUIRE(g.nodes.size() == 2);
    CHECK(g.nodes[1] == Marking{{"P1", ms({"y"})}, {"P2", ms({"x"})}});
    CHECK(g.deadlock == std::vector<bool>{false, true});
    CHECK(g.edges == std::vector<ReachabilityEdge>{{0, 1, "t1"}});
    CHECK_FALSE(g.truncated);
}

TEST_CASE("reachability graph of the debris net matches the oracle") {
    auto fig9 = testing::fig9_net();
    Environment risk = {{"collision_prob", 0.5}};
    auto g = reachability_graph(fig9, fig9.initial_marking, risk, 10, 1000);

    // t1's guard holds under `risk`, so the guard-free oracle applies.
    auto want = testing::oracle_reachable(fig9, fig9.initial_marking, 10);
    std::set<testing::PlainMarking> got, got_dead;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        got.insert(testing::plain(fig9, g.nodes[k]));
        if (g.deadlock[k]) got_dead.insert(testing::plain(fig9, g.nodes[k]));
    }
    CHECK(g.nodes.size() == 5);
    CHECK(got == want.states);
    CHECK(got_dead == want.deadlocks);
    REQUIRE(g.find(Marking{{"P1", ms({"S"})}}));
    CHECK(g.deadlock[*g.find(Marking{{"P1", ms({"S"})}})]);

    Environment calm = {{"collision_prob", 0}};
    auto quiet = reachability_graph(fig9, fig9.initial_marking, calm, 10, 1000);
    CHECK(quiet.nodes.size() == 1);
    CHECK(quiet.deadlock[0]);
}

TEST_CASE("reachability graph bounds") {
    auto fig9 = testing::fig9_net();
    Environment risk = {{"collision_prob", 0.5}};
    auto root = reachability_graph(fig9, fig9.initial_marking, risk, 0, 1000);
    CHECK(root.nodes.size() == 1);
    CHECK(root.truncated);
    CHECK(root.edges.empty());

    auto capped = reachability_graph(fig9, fig9.initial_marking, risk, 10, 2);
    CHECK(capped.nodes.size() == 2);
    CHECK(capped.truncated);
}

TEST_CASE("reachability graphs agree with the oracle on random nets") {
    std::mt19937_64 rng(13);
    for (int n = 0; n < 200; ++n) {
        auto net = testing::random_net(rng, 4, 3, 3);
        auto g = reachability_graph(net, net.initial_marking, kNoVars, 3, 100000);
        auto want = testing::oracle_reachable(net, net.initial_marking, 3);
        std::set<testing::PlainMarking> got;
        for (std::size_t k = 0; k < g.nodes.size(); ++k) {
            got.insert(testing::plain(net, g.nodes[k]));
            CHECK(g.depth[k] <= 3);
        }
        CHECK(got.size() == g.nodes.size());
        CHECK(got == want.states);
        for (const auto& e : g.edges) CHECK(fire(net, g.nodes[e.from], e.transition, kNoVars) == g.nodes[e.to]);
    }
}
