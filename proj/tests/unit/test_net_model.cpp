#include <doctest.h>

#include <algorithm>
#include <random>

#include "opn/net.hpp"
#include "support/reference_nets.hpp"

using namespace opn;
using opn::testing::ms;

TEST_CASE("identifiers") {
    CHECK(is_identifier("P1"));
    CHECK(is_identifier("collision_prob"));
    CHECK(is_identifier("x"));
    CHECK_FALSE(is_identifier(""));
    CHECK_FALSE(is_identifier("1x"));
    CHECK_FALSE(is_identifier("_x"));
    CHECK_FALSE(is_identifier("a-b"));
}

TEST_CASE("multiset basics") {
    Multiset a = {{"x", 2}, {"y", 1}};
    CHECK(a.total() == 3);
    CHECK(a.count("x") == 2);
    CHECK(a.count("z") == 0);
    CHECK(a.contains(ms({"x", "y"})));
    CHECK_FALSE(a.contains(ms({"y", "y"})));

    CHECK(a.remove(ms({"x", "x"})));
    CHECK(a == ms({"y"}));
    CHECK_FALSE(a.remove(ms({"x"})));
    CHECK(a == ms({"y"}));

    Multiset zero = {{"x", 0}};
    CHECK(zero.empty());
    CHECK_THROWS_AS(zero.add("x", -1), std::invalid_argument);
}

TEST_CASE("marking keeps no empty entries") {
    Marking m = {{"P1", ms({"x"})}};
    CHECK(m.remove("P1", ms({"x"})));
    CHECK(m.empty());
    CHECK(m == Marking{});
    m.set("P2", Multiset{});
    CHECK(m == Marking{});
    CHECK(m.at("P9").empty());
}

TEST_CASE("environment rejects non-finite values") {
    Environment env;
    CHECK_THROWS_AS(env.set("clock", std::numeric_limits<double>::infinity()), std::invalid_argument);
    CHECK_THROWS_AS(env.set("clock", std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
    env.set("clock", 5);
    CHECK(env.get("clock") == 5.0);
    CHECK_FALSE(env.get("T1").has_value());
    auto merged = env.overlaid({{"clock", 6}, {"T1", 5}});
    CHECK(merged.get("clock") == 6.0);
    CHECK(merged.get("T1") == 5.0);
}

TEST_CASE("validate_net on the bundled nets") {
    for (const auto& net : {testing::fig5_net(), testing::fig6_net(), testing::fig7_net(), testing::fig9_net()}) {
        CAPTURE(net.name);
        CHECK(validate_net(net).empty());
    }
    auto fig5 = testing::fig5_net();
    CHECK(fig5.order() == 2);
    CHECK(fig5.transitions.size() == 1);
    CHECK(fig5.arcs.size() == 4);
}

TEST_CASE("validate_net reports a place-to-place arc") {
    auto net = testing::fig5_net();
    net.arcs.push_back({"P1", "P2", ms({"x"})});
    auto v = validate_net(net);
    REQUIRE(v.size() == 1);
    CHECK(v[0].element == "arc P1 -> P2");
    CHECK(v[0].rule.find("place and a transition") != std::string::npos);
}

TEST_CASE("validate_net reports a foreign marking color") {
    auto net = testing::fig5_net();
    net.initial_marking.add("P1", ms({"z"}));
    auto v = validate_net(net);
    REQUIRE(v.size() == 1);
    CHECK(v[0].element == "marking P1");
    CHECK(v[0].rule.find("'z'") != std::string::npos);
}

TEST_CASE("validate_net other rules") {
    SUBCASE("duplicate place") {
        auto net = testing::fig5_net();
        net.places.push_back({"P1", Rotation::Clockwise});
        CHECK(validate_net(net).size() == 1);
    }
    SUBCASE("transition id shared with a place") {
        auto net = testing::fig5_net();
        net.transitions.push_back({"P2"});
        CHECK(validate_net(net).size() >= 1);
    }
    SUBCASE("duplicate arc") {
        auto net = testing::fig5_net();
        net.arcs.push_back({"P1", "t1", ms({"y"})});
        auto v = validate_net(net);
        REQUIRE(v.size() == 1);
        CHECK(v[0].rule == "declared more than once");
    }
    SUBCASE("empty arc weight") {
        auto net = testing::fig5_net();
        net.arcs[0].weight = Multiset{};
        CHECK(validate_net(net).size() == 1);
    }
    SUBCASE("arc weight with unknown color") {
        auto net = testing::fig5_net();
        net.arcs[0].weight = ms({"w"});
        CHECK(validate_net(net).size() == 1);
    }
    SUBCASE("undeclared endpoint") {
        auto net = testing::fig5_net();
        net.arcs.push_back({"P9", "t1", ms({"x"})});
        auto v = validate_net(net);
        REQUIRE(v.size() == 1);
        CHECK(v[0].rule.find("not declared") != std::string::npos);
    }
    SUBCASE("invalid rotation") {
        auto net = testing::fig5_net();
        net.places[0].rotation = static_cast<Rotation>(0);
        CHECK(validate_net(net).size() == 1);
    }
    SUBCASE("duplicate color") {
        auto net = testing::fig5_net();
        net.colors.push_back({"x"});
        CHECK(validate_net(net).size() == 1);
    }
    SUBCASE("marking on undeclared place") {
        auto net = testing::fig5_net();
        net.initial_marking.add("P7", ms({"x"}));
        CHECK(validate_net(net).size() == 1);
    }
}

TEST_CASE("arc order never changes validation") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        auto net = testing::random_net(rng);
        if (i % 3 == 0) net.arcs.push_back({net.places[0].id, net.places[0].id, ms({"c0"})});
        auto shuffled = net;
        std::shuffle(shuffled.arcs.begin(), shuffled.arcs.end(), rng);
        CHECK(validate_net(net).size() == validate_net(shuffled).size());
    }
}

TEST_CASE("marking_vector follows place declaration order") {
    auto fig6 = testing::fig6_net();
    auto vec = marking_vector(fig6, fig6.initial_marking);
    REQUIRE(vec.size() == 6);
    CHECK(vec[0] == ms({"A"}));
    CHECK(vec[1] == ms({"B"}));
    CHECK(vec[2] == ms({"C"}));
    CHECK(vec[3] == ms({"D"}));
    CHECK(vec[4].empty());
    CHECK(vec[5].empty());

    auto empty = marking_vector(fig6, Marking{});
    CHECK(std::all_of(empty.begin(), empty.end(), [](const Multiset& m) { return m.empty(); }));

    auto fig9 = testing::fig9_net();
    auto v9 = marking_vector(fig9, fig9.initial_marking);
    std::vector<Multiset> expected = {ms({"S"}), ms({"D"}), {}, {}};
    CHECK(v9 == expected);

    CHECK_THROWS_AS(marking_vector(fig9, Marking{{"P7", ms({"S"})}}), Error);
}

TEST_CASE("marking_vector round-trips and preserves token count") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        auto net = testing::random_net(rng);
        const auto& m = net.initial_marking;
        auto vec = marking_vector(net, m);
        Multiset::Count total = 0;
        for (const auto& entry : vec) total += entry.total();
        CHECK(total == m.total());
        CHECK(marking_from_vector(net, vec) == m);
    }
}
