#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "opn/netfile.hpp"
#include "support/reference_nets.hpp"

using namespace opn;
using opn::testing::ms;

namespace {

Diagnostic syntax_error(std::string_view text) {
    try {
        parse_net(text);
    } catch (const NetLoadError& e) {
        REQUIRE(e.kind() == NetLoadError::Kind::Syntax);
        REQUIRE(e.diagnostics().size() == 1);
        return e.diagnostics().front();
    }
    FAIL("expected a syntax error");
    return {};
}

const char* kSmall =
    "[net]\n"
    "name = small\n"
    "[colors]\n"
    "x, y\n"
    "[places]\n"
    "P1 +\n"
    "P2 -\n"
    "[transitions]\n"
    "t1 : a > 0\n"
    "[arcs]\n"
    "P1 -> t1 : x\n"
    "t1 -> P2 : 2x + y\n"
    "[marking]\n"
    "P1 = x\n";

}  // namespace

TEST_CASE("bundled models load to the reference nets") {
    CHECK(load_net(testing::model_path("fig5_swap.opn")) == testing::fig5_net());
    CHECK(load_net(testing::model_path("fig6_classify.opn")) == testing::fig6_net());
    CHECK(load_net(testing::model_path("fig7_satsat.opn")) == testing::fig7_net());
    CHECK(load_net(testing::model_path("fig9_satdebris.opn")) == testing::fig9_net());
}

TEST_CASE("parse a small net") {
    auto net = parse_net(kSmall);
    CHECK(net.name == "small");
    CHECK(net.colors == std::vector<TokenColor>{{"x"}, {"y"}});
    CHECK(net.places[1].rotation == Rotation::Anticlockwise);
    CHECK(render_guard(net.transitions[0].guard) == "a > 0");
    CHECK(*net.arc_weight("t1", "P2") == Multiset{{{"x", 2}, {"y", 1}}});
    CHECK(net.initial_marking == Marking{{"P1", ms({"x"})}});
}

TEST_CASE("sections may come in any order and comments are ignored") {
    const char* shuffled =
        "# leading comment\n"
        "[marking]\n"
        "P1 = x   # trailing comment\n"
        "\n"
        "[arcs]\n"
        "P1 -> t1 : x\n"
        "t1 -> P2 : 2x + y\n"
        "[transitions]\n"
        "t1 : a > 0\n"
        "[places]\n"
        "P1 +\n"
        "P2 -\n"
        "[colors]\n"
        "x\n"
        "y\n"
        "[net]\n"
        "name = small\n";
    CHECK(parse_net(shuffled) == parse_net(kSmall));
}

TEST_CASE("a missing net name defaults to the file stem") {
    auto path = std::filesystem::temp_directory_path() / "opn_stem_check.opn";
    {
        std::ofstream out(path);
        out << "[colors]\nx\n[places]\nP1 +\n[transitions]\nt1\n[arcs]\nP1 -> t1 : x\n";
    }
    CHECK(load_net(path).name == "opn_stem_check");
    std::filesystem::remove(path);
}

TEST_CASE("syntax errors carry line and column") {
    auto d = syntax_error("[colors]\nx\n[places]\nP1 +\n[transitions]\nt1 : a >\n");
    CHECK(d.line == 6);
    CHECK(d.column == 9);

    d = syntax_error("[colors]\nx\n[places]\nP1 +\n[transitions]\nt1\n[arcs]\nP1 -> t1 : x +\n");
    CHECK(d.line == 8);
    CHECK(d.column == 15);

    d = syntax_error("name = x\n[net]\n");
    CHECK(d.line == 1);
    CHECK(d.message == "content before the first section header");

    d = syntax_error("[nets]\n");
    CHECK(d.message == "unknown section [nets]");

    d = syntax_error("[places]\nP1 +\n[places]\nP2 +\n");
    CHECK(d.line == 3);

    d = syntax_error("[places]\nP1 *\n");
    CHECK(d.line == 2);
    CHECK(d.column == 4);

    d = syntax_error("[places]\n  P1\n");
    CHECK(d.message == "expected rotation sign '+' or '-'");

    d = syntax_error("[colors]\nx 9y\n");
    CHECK(d.column == 3);
}

TEST_CASE("validation errors point at the offending declaration") {
    const char* text =
        "[colors]\nx\n"
        "[places]\nP1 +\n"
        "[transitions]\nt1\n"
        "[arcs]\n"
        "P1 -> t1 : x\n"
        "t1 -> P9 : x\n";
    try {
        parse_net(text, "bad.opn");
        FAIL("expected a validation error");
    } catch (const NetLoadError& e) {
        CHECK(e.kind() == NetLoadError::Kind::Validation);
        REQUIRE(e.diagnostics().size() == 1);
        CHECK(e.diagnostics()[0].line == 9);
        CHECK(std::string(e.what()).starts_with("bad.opn:9: arc t1 -> P9:"));
    }
}

TEST_CASE("unreadable files are I/O errors") {
    try {
        load_net("/nonexistent/net.opn");
        FAIL("expected an I/O error");
    } catch (const NetLoadError& e) {
        CHECK(e.kind() == NetLoadError::Kind::Io);
    }
}

TEST_CASE("marking literals") {
    auto fig6 = testing::fig6_net();
    auto m = parse_marking_spec("P5=A+C; P6 = B + D", fig6);
    CHECK(m == Marking{{"P5", ms({"A", "C"})}, {"P6", ms({"B", "D"})}});
    CHECK(render_marking_spec(fig6, m) == "P5=A+C; P6=B+D");
    CHECK(render_marking_vector(fig6, m) == "(0, 0, 0, 0, A+C, B+D)");
    CHECK(parse_marking_spec("  ", fig6).empty());
    CHECK(render_marking_spec(fig6, Marking{}) == "(empty)");
    CHECK(parse_marking_spec(render_marking_spec(fig6, fig6.initial_marking), fig6) == fig6.initial_marking);

    CHECK_THROWS_AS(parse_marking_spec("P9=A", fig6), Error);
    CHECK_THROWS_AS(parse_marking_spec("P1=A; P1=B", fig6), Error);
    CHECK_THROWS_AS(parse_marking_spec("P1", fig6), Error);
    CHECK_THROWS_AS(parse_marking_spec("P1=Z", fig6), Error);
}

TEST_CASE("environment bindings") {
    auto env = parse_env_bindings("clock=6, T1=5,eps=0.5");
    CHECK(env.get("clock") == 6.0);
    CHECK(env.get("eps") == 0.5);
    CHECK(render_env(env) == "T1=5, clock=6, eps=0.5");
    CHECK(parse_env_bindings("").values().empty());
    CHECK(parse_env_bindings("x=-1e3").get("x") == -1000.0);

    CHECK_THROWS_AS(parse_env_bindings("clock"), Error);
    CHECK_THROWS_AS(parse_env_bindings("9x=1"), Error);
    CHECK_THROWS_AS(parse_env_bindings("x=abc"), Error);
    CHECK_THROWS_AS(parse_env_bindings("x=inf"), Error);
}
