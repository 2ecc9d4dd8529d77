#include "doctest.h"

#include "support.hpp"
#include "tabsim/netlist.hpp"
#include "tabsim/oracle.hpp"

using namespace tabsim;
using tabsim::tests::fixture_path;
using tabsim::tests::read_file;

namespace {

ParseError capture(const std::string& text) {
    try {
        parse_netlist(text);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("expected ParseError");
    throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("minimal two-branch circuit") {
    const CircuitGraph g = parse_netlist("R1 1 0 2.0\nV1 1 0 3.0");
    CHECK(g.node_count() == 2);
    CHECK(g.branch_count() == 2);
    CHECK(g.reference_node == "0");
    CHECK(g.branches[0].type == ElementType::Resistor);
    CHECK(g.branches[0].value == 2.0);
    CHECK(g.branches[1].type == ElementType::VoltageSource);
    CHECK(g.branches[1].line == 2);
}

TEST_CASE("comments, blank lines and arbitrary node tokens") {
    const CircuitGraph g = parse_netlist(
        "# header comment\n"
        "\n"
        "V1 in 0 1.5   # trailing comment\n"
        "R1 in out 10\n"
        "R2 out 0 20\n");
    CHECK(g.branch_count() == 3);
    CHECK(g.node_index("in") >= 0);
    CHECK(g.node_index("out") >= 0);
    CHECK(g.branches[0].line == 3);
}

TEST_CASE("VCVS control resolves to the branch carrying the source") {
    const CircuitGraph g =
        parse_netlist(read_file(fixture_path("example_vcvs_divider.cir")));
    const int vcvs = g.find_branch("E1");
    REQUIRE(vcvs >= 0);
    CHECK(g.branches[static_cast<std::size_t>(vcvs)].control == g.find_branch("V1"));
    CHECK(g.branches[static_cast<std::size_t>(g.find_branch("V1"))].type ==
          ElementType::VoltageSource);
}

TEST_CASE("control lookup is case-insensitive") {
    const CircuitGraph g = parse_netlist("V1 1 0 1\nR1 1 0 1\nF1 1 0 v1 0.5");
    CHECK(g.branches[2].control == 0);
}

TEST_CASE("diagnostics carry 1-based line numbers") {
    SUBCASE("unknown element prefix") {
        const ParseError e = capture("R1 1 0 5\nX1 1 0 5\n");
        CHECK(e.code() == ParseErrorCode::UnknownElementPrefix);
        CHECK(e.line() == 2);
    }
    SUBCASE("arity") {
        const ParseError e = capture("# comment\n\nR1 1 0\n");
        CHECK(e.code() == ParseErrorCode::ArityError);
        CHECK(e.line() == 3);
    }
    SUBCASE("controlled source arity") {
        const ParseError e = capture("V1 1 0 1\nE1 1 0 0.5\n");
        CHECK(e.code() == ParseErrorCode::ArityError);
        CHECK(e.line() == 2);
    }
    SUBCASE("invalid number") {
        const ParseError e = capture("R1 1 0 2k\n");
        CHECK(e.code() == ParseErrorCode::InvalidNumber);
        CHECK(e.line() == 1);
    }
    SUBCASE("duplicate name, case-insensitive") {
        const ParseError e = capture("R1 1 0 5\nr1 1 0 5\n");
        CHECK(e.code() == ParseErrorCode::DuplicateName);
        CHECK(e.line() == 2);
    }
    SUBCASE("dangling control reference") {
        const ParseError e = capture("E1 2 0 Rx 0.5\nV1 2 0 1\n");
        CHECK(e.code() == ParseErrorCode::UnresolvedControlRef);
        CHECK(e.line() == 1);
    }
    SUBCASE("self control") {
        const ParseError e = capture("V1 1 0 1\nF1 1 0 F1 2\n");
        CHECK(e.code() == ParseErrorCode::UnresolvedControlRef);
        CHECK(e.line() == 2);
    }
    SUBCASE("self loop") {
        const ParseError e = capture("V1 1 0 1\nR1 2 2 5\n");
        CHECK(e.code() == ParseErrorCode::SelfLoop);
        CHECK(e.line() == 2);
    }
    SUBCASE("zero resistance") {
        const ParseError e = capture("R1 1 0 0\n");
        CHECK(e.code() == ParseErrorCode::NonPositiveResistance);
        CHECK(e.line() == 1);
    }
    SUBCASE("negative resistance") {
        const ParseError e = capture("V1 1 0 1\nR1 1 0 -2\n");
        CHECK(e.code() == ParseErrorCode::NonPositiveResistance);
        CHECK(e.line() == 2);
    }
    SUBCASE("missing ground") {
        const ParseError e = capture("R1 1 2 5\nV1 1 2 1\n");
        CHECK(e.code() == ParseErrorCode::MissingGround);
    }
    SUBCASE("empty input") {
        const ParseError e = capture("# nothing here\n");
        CHECK(e.code() == ParseErrorCode::MissingGround);
        CHECK(e.line() == 1);
    }
    SUBCASE("disconnected component") {
        const ParseError e = capture("V1 1 0 1\nR1 2 3 5\nR2 3 2 7\n");
        CHECK(e.code() == ParseErrorCode::DisconnectedGraph);
        CHECK(e.line() == 2);
    }
}

TEST_CASE("numeric literals: exponents yes, unit suffixes no") {
    const CircuitGraph g = parse_netlist("V1 1 0 -1.5e-3\nR1 1 0 +2E2\n");
    CHECK(g.branches[0].value == -1.5e-3);
    CHECK(g.branches[1].value == 2e2);
    CHECK_THROWS_AS(parse_netlist("R1 1 0 1meg\n"), ParseError);
    CHECK_THROWS_AS(parse_netlist("R1 1 0 nan\n"), ParseError);
    CHECK_THROWS_AS(parse_netlist("R1 1 0 inf\n"), ParseError);
}

TEST_CASE("serialize -> parse round-trips the canonical form") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        GeneratorConfig cfg;
        cfg.seed = seed;
        const CircuitGraph g = generate(cfg);
        const std::string text = serialize(g);
        const CircuitGraph reparsed = parse_netlist(text);
        CHECK(serialize(reparsed) == text);
        REQUIRE(reparsed.branch_count() == g.branch_count());
        for (int j = 0; j < g.branch_count(); ++j) {
            const Branch& a = g.branches[static_cast<std::size_t>(j)];
            const Branch& b = reparsed.branches[static_cast<std::size_t>(j)];
            CHECK(a.name == b.name);
            CHECK(a.node_plus == b.node_plus);
            CHECK(a.node_minus == b.node_minus);
            CHECK(a.type == b.type);
            CHECK(a.value == b.value);  // 17 digits round-trip bit-exactly
            CHECK(a.control == b.control);
        }
    }
}

TEST_CASE("fixtures round-trip through their canonical form") {
    for (const char* name :
         {"smallest.cir", "example_vcvs_divider.cir",
          "example_vccs_two_sources.cir", "example_thevenin_port.cir",
          "ccvs_series_pair.cir"}) {
        const CircuitGraph g = parse_netlist(read_file(fixture_path(name)));
        CHECK(serialize(parse_netlist(serialize(g))) == serialize(g));
    }
}

TEST_CASE("topology screen: voltage loops") {
    SUBCASE("two parallel independent voltage sources") {
        const CircuitGraph g = parse_netlist("V1 1 0 5\nV2 1 0 5\n");
        const auto warnings = validate_topology(g);
        REQUIRE(warnings.size() == 1);
        CHECK(warnings[0].kind == TopologyWarningKind::VoltageLoop);
    }
    SUBCASE("VCVS closing a loop with a source counts too") {
        const CircuitGraph g = parse_netlist("V1 1 0 5\nR1 1 0 2\nE1 1 0 R1 0.5\n");
        const auto warnings = validate_topology(g);
        REQUIRE(warnings.size() == 1);
        CHECK(warnings[0].kind == TopologyWarningKind::VoltageLoop);
    }
}

TEST_CASE("topology screen: current cutsets") {
    const CircuitGraph g = parse_netlist("I1 1 2 1\nI2 2 0 2\n");
    const auto warnings = validate_topology(g);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].kind == TopologyWarningKind::CurrentCutset);
}

TEST_CASE("well-posed mixed circuit raises no warnings") {
    const CircuitGraph g =
        parse_netlist(read_file(fixture_path("example_vccs_two_sources.cir")));
    CHECK(validate_topology(g).empty());
}
