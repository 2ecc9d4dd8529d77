#include "doctest.h"

#include <cmath>
#include <string>

#include "support.hpp"
#include "tabsim/oracle.hpp"
#include "tabsim/superposition.hpp"

using namespace tabsim;
using tabsim::tests::fixture_path;
using tabsim::tests::read_file;
using tabsim::tests::rel_dev;

namespace {

/// Divider + VCVS circuit, parameterized. Output current is i(R3).
CircuitGraph vcvs_divider(double g1, double g2, double g3, double a, double e) {
    const std::string text = "V1 1 0 " + format_double(e) + "\n" +
                             "R1 1 2 " + format_double(1.0 / g1) + "\n" +
                             "R2 2 0 " + format_double(1.0 / g2) + "\n" +
                             "E1 2 3 V1 " + format_double(a) + "\n" +
                             "R3 0 3 " + format_double(1.0 / g3) + "\n";
    return parse_netlist(text);
}

/// Closed form for i(R3), derived by node analysis in fixtures/README.md.
double divider_i3(double g1, double g2, double g3, double a, double e) {
    return -(g1 - a * (g1 + g2)) / (g1 + g2 + g3) * g3 * e;
}

double current_of(const CircuitGraph& g, const SolutionVector& x,
                  const std::string& branch) {
    return x.currents[static_cast<std::size_t>(g.find_branch(branch))];
}

double voltage_of(const CircuitGraph& g, const SolutionVector& x,
                  const std::string& branch) {
    return x.voltages[static_cast<std::size_t>(g.find_branch(branch))];
}

}  // namespace

TEST_CASE("divider with VCVS matches the closed form") {
    struct Instance { double g1, g2, g3, a, e; };
    for (const Instance& p : {Instance{1, 1, 1, 2, 3},
                              Instance{2, 1, 0.5, -1, 5},
                              Instance{1, 1, 1, 0, 3}}) {
        const CircuitGraph g = vcvs_divider(p.g1, p.g2, p.g3, p.a, p.e);
        const SolutionVector x = solve_direct(assemble(g));
        const double want = divider_i3(p.g1, p.g2, p.g3, p.a, p.e);
        CHECK(rel_dev(current_of(g, x, "R3"), want) <= 1e-9);
    }
}

TEST_CASE("zero gain reduces to the plain source divider") {
    const CircuitGraph g = vcvs_divider(1, 1, 1, 0, 3);
    const SolutionVector x = solve_direct(assemble(g));
    const double want = -(1.0 / 3.0) * 1.0 * 3.0;  // -G1/(G1+G2+G3) * G3 * E
    CHECK(rel_dev(current_of(g, x, "R3"), want) <= 1e-9);
}

TEST_CASE("all independent sources zero gives the zero solution") {
    CircuitGraph g =
        parse_netlist(read_file(fixture_path("example_thevenin_port.cir")));
    for (Branch& br : g.branches)
        if (is_independent_source(br.type)) br.value = 0.0;
    const SolutionVector x = solve_direct(assemble(g));
    CHECK(max_abs(x.to_stacked()) == 0.0);
}

TEST_CASE("divider contribution split matches the per-part closed forms") {
    const double g1 = 1, g2 = 1, g3 = 1, a = 2, e = 3;
    const CircuitGraph g = vcvs_divider(g1, g2, g3, a, e);
    const TableauSystem sys = assemble(g);

    const double i3_independent = -g1 / (g1 + g2 + g3) * g3 * e;
    const double i3_controlled = a * (g1 + g2) / (g1 + g2 + g3) * g3 * e;

    for (const ContributionSet& cs :
         {decompose_via_full_solution(sys), decompose_via_control_system(sys)}) {
        REQUIRE(cs.independent.size() == 1);
        REQUIRE(cs.controlled.size() == 1);
        const SolutionVector& part_v1 = cs.independent.begin()->second;
        const SolutionVector& part_e1 = cs.controlled.begin()->second;
        CHECK(rel_dev(current_of(g, part_v1, "R3"), i3_independent) <= 1e-9);
        CHECK(rel_dev(current_of(g, part_e1, "R3"), i3_controlled) <= 1e-9);
        CHECK(rel_dev(current_of(g, cs.total, "R3"),
                      i3_independent + i3_controlled) <= 1e-9);
    }
}

TEST_CASE("VCCS circuit: totals and split reproduce the hand solution") {
    const CircuitGraph g =
        parse_netlist(read_file(fixture_path("example_vccs_two_sources.cir")));
    const TableauSystem sys = assemble(g);

    const SolutionVector x = solve_direct(sys);
    CHECK(rel_dev(current_of(g, x, "V1"), 9.0) <= 1e-9);   // (g+G2)(E2-E1)
    CHECK(rel_dev(voltage_of(g, x, "R2"), -3.0) <= 1e-9);  // E1-E2

    for (const ContributionSet& cs :
         {decompose_via_full_solution(sys), decompose_via_control_system(sys)}) {
        double i0_independent = 0.0;
        for (const auto& [branch, part] : cs.independent)
            i0_independent += current_of(g, part, "V1");
        CHECK(rel_dev(i0_independent, 3.0) <= 1e-9);  // (E2-E1)G2

        const SolutionVector& vccs_part = cs.controlled.begin()->second;
        CHECK(rel_dev(current_of(g, vccs_part, "V1"), 6.0) <= 1e-9);  // -g v2
        CHECK(std::abs(voltage_of(g, vccs_part, "R2")) <= 1e-12);     // v2'' = 0
    }
}

TEST_CASE("no controlled sources: plain per-source superposition") {
    const CircuitGraph g =
        parse_netlist("V1 1 0 2\nR1 1 2 1\nI1 0 2 1\nR2 2 0 1");
    const TableauSystem sys = assemble(g);
    const ContributionSet cs = decompose_via_control_system(sys);
    CHECK(cs.controlled.empty());
    CHECK(cs.independent.size() == 2);
    CHECK(verify_additivity(cs).pass);
    CHECK(rel_dev(cs.total.to_stacked(), solve_direct(sys).to_stacked()) <=
          1e-12);
}

TEST_CASE("independent parts sum to the zeroed-control solution") {
    for (std::uint64_t seed = 200; seed < 230; ++seed) {
        GeneratorConfig cfg;
        cfg.seed = seed;
        const CircuitGraph g = generate(cfg);
        const TableauSystem sys = assemble(g);
        const ContributionSet cs = decompose_via_control_system(sys);

        const Vec x0 = solve(factor(zero_controls(sys).L), sys.U);
        Vec independent_sum(x0.size(), 0.0);
        for (const auto& [branch, part] : cs.independent) {
            const Vec stacked = part.to_stacked();
            for (std::size_t i = 0; i < stacked.size(); ++i)
                independent_sum[i] += stacked[i];
        }
        CHECK(rel_dev(independent_sum, x0) <= 1e-10);
    }
}

TEST_CASE("additivity and strategy equivalence over random circuits") {
    for (std::uint64_t seed = 300; seed < 420; ++seed) {
        GeneratorConfig cfg;
        cfg.seed = seed;
        const CircuitGraph g = generate(cfg);
        const TableauSystem sys = assemble(g);

        const Vec direct = solve_direct(sys).to_stacked();
        const ContributionSet via_full = decompose_via_full_solution(sys);
        const ContributionSet via_control = decompose_via_control_system(sys);

        CHECK(verify_additivity(via_full).pass);
        CHECK(verify_additivity(via_control).pass);
        CHECK(rel_dev(via_full.total.to_stacked(), direct) <= 1e-8);
        CHECK(rel_dev(via_control.total.to_stacked(), direct) <= 1e-8);

        CHECK(subcircuit_law_residual(sys, via_full) <= 1e-9);
        CHECK(subcircuit_law_residual(sys, via_control) <= 1e-9);
    }
}

TEST_CASE("CCVS part solves the zeroed system driven by the full solution") {
    const CircuitGraph g =
        parse_netlist(read_file(fixture_path("ccvs_series_pair.cir")));
    const TableauSystem sys = assemble(g);
    const ContributionSet cs = decompose_via_full_solution(sys);

    const int ccvs = g.find_branch("H1");
    const SolutionVector& part = cs.controlled.at(ccvs);

    // rhs carries gain * i(R1) at the CCVS row, with the control current
    // read from the total solution, not from the part itself.
    Vec rhs(static_cast<std::size_t>(sys.dimension()), 0.0);
    const double control_current = current_of(g, cs.total, "R1");
    rhs[static_cast<std::size_t>(sys.branch_count + ccvs)] =
        1.0 * control_current;  // fixture gain r = 1

    const Vec lhs = zero_controls(sys).L.multiply(part.to_stacked());
    CHECK(max_abs_diff(lhs, rhs) <= 1e-9 * std::max(1.0, max_abs(rhs)));
    CHECK(control_current != current_of(g, part, "R1"));
    CHECK(subcircuit_law_residual(sys, cs) <= 1e-9);
}

TEST_CASE("verify_additivity localizes a corrupted part") {
    const CircuitGraph g =
        parse_netlist(read_file(fixture_path("example_vccs_two_sources.cir")));
    const TableauSystem sys = assemble(g);
    ContributionSet cs = decompose_via_full_solution(sys);
    REQUIRE(verify_additivity(cs).pass);

    SolutionVector& vccs_part = cs.controlled.begin()->second;
    for (double& v : vccs_part.currents) v = 0.0;
    for (double& v : vccs_part.voltages) v = 0.0;
    const AdditivityReport report = verify_additivity(cs);
    CHECK_FALSE(report.pass);
    CHECK(report.max_deviation > 1.0);  // the zeroed part carried 6 A
    CHECK(report.worst_component >= 0);
}

TEST_CASE("homogeneity in the independent source values") {
    for (std::uint64_t seed = 500; seed < 540; ++seed) {
        GeneratorConfig cfg;
        cfg.seed = seed;
        const CircuitGraph g = generate(cfg);
        const Vec x = solve_direct(assemble(g)).to_stacked();

        for (double alpha : {0.0, 0.5, 3.0}) {
            CircuitGraph scaled = g;
            for (Branch& br : scaled.branches)
                if (is_independent_source(br.type)) br.value *= alpha;
            const TableauSystem sys = assemble(scaled);
            const Vec got = solve_direct(sys).to_stacked();

            Vec want = x;
            for (double& v : want) v *= alpha;
            CHECK(max_abs_diff(got, want) <=
                  1e-9 * std::max(1.0, max_abs(want)));

            if (alpha == 0.0) {
                // Every part vanishes with the independent sources off,
                // controlled parts included.
                for (const ContributionSet& cs :
                     {decompose_via_full_solution(sys),
                      decompose_via_control_system(sys)}) {
                    CHECK(max_abs(cs.total.to_stacked()) <= 1e-12);
                    for (const auto& [branch, part] : cs.independent)
                        CHECK(max_abs(part.to_stacked()) <= 1e-12);
                    for (const auto& [branch, part] : cs.controlled)
                        CHECK(max_abs(part.to_stacked()) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("CCVS whose zeroing shorts a source: SingularL0 reported distinctly") {
    // Full system solvable (v(H1) = v(V1) forces i(V1) = 10), but the
    // zeroed-control system pits a 0 V source against V1.
    const CircuitGraph g = parse_netlist("V1 1 0 5\nH1 1 0 V1 0.5");
    const TableauSystem sys = assemble(g);

    const SolutionVector x = solve_direct(sys);
    CHECK(rel_dev(current_of(g, x, "V1"), 10.0) <= 1e-9);

    for (auto* decompose :
         {&decompose_via_full_solution, &decompose_via_control_system}) {
        try {
            (*decompose)(sys);
            FAIL("expected SingularSystem");
        } catch (const SingularSystem& e) {
            CHECK(e.context() == SingularContext::ZeroedControls);
        }
    }
}

TEST_CASE("critical gain: L singular while the zeroed system is fine") {
    // VCVS feedback with gain -1 contradicts the source: e2 = -(5 - e2).
    const CircuitGraph g = parse_netlist("V1 1 0 5\nR1 1 2 1\nE1 2 0 R1 -1");
    const TableauSystem sys = assemble(g);

    CHECK_THROWS_AS(solve_direct(sys), SingularSystem);
    try {
        decompose_via_control_system(sys);
        FAIL("expected SingularSystem");
    } catch (const SingularSystem& e) {
        CHECK(e.context() == SingularContext::ControlSystem);
    }
    // The full-solution route hits the same wall at the full factor.
    try {
        decompose_via_full_solution(sys);
        FAIL("expected SingularSystem");
    } catch (const SingularSystem& e) {
        CHECK(e.context() == SingularContext::FullSystem);
    }
}

TEST_CASE("solution vector stacking round-trips") {
    SolutionVector s;
    s.currents = {1, 2, 3};
    s.voltages = {4, 5, 6};
    const Vec stacked = s.to_stacked();
    CHECK(stacked == Vec{1, 2, 3, 4, 5, 6});
    const SolutionVector back = SolutionVector::from_stacked(stacked);
    CHECK(back.currents == s.currents);
    CHECK(back.voltages == s.voltages);
}
