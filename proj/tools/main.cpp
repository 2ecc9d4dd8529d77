#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tabsim/oracle.hpp"
#include "tabsim/report.hpp"
#include "tabsim/tableau.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitSingular = 3;
constexpr int kExitVerification = 4;

struct AnalyzeArgs {
    std::string netlist_path;
    bool json = false;
    bool contributions = false;
    std::string strategy = "control";
    bool no_verify = false;
    std::vector<std::string> thevenin_port;
    double tolerance = 1e-8;
    std::string dump_prefix;
};

struct VerifyArgs {
    int count = 500;
    std::uint64_t seed = 1;
};

double relative_max_deviation(const tabsim::Vec& got, const tabsim::Vec& want) {
    return tabsim::max_abs_diff(got, want) /
           std::max(1.0, tabsim::max_abs(want));
}

int run_analyze(const AnalyzeArgs& args) {
    std::ifstream in(args.netlist_path);
    if (!in) {
        std::cerr << "error: cannot read '" << args.netlist_path << "'\n";
        return kExitParse;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();

    const tabsim::CircuitGraph g = tabsim::parse_netlist(buffer.str());

    for (const tabsim::TopologyWarning& w : tabsim::validate_topology(g))
        std::cerr << "warning: " << w.message << "\n";

    if (!args.dump_prefix.empty()) {
        const tabsim::TableauSystem sys = tabsim::assemble(g);
        std::ofstream lout(args.dump_prefix + ".L.csv");
        std::ofstream uout(args.dump_prefix + ".U.csv");
        tabsim::dump_matrix_csv(sys.L, lout);
        tabsim::dump_vector_csv(sys.U, uout);
    }

    tabsim::AnalysisOptions options;
    if (args.strategy == "direct") options.strategy = tabsim::Strategy::Direct;
    else if (args.strategy == "full") options.strategy = tabsim::Strategy::FullSolution;
    else options.strategy = tabsim::Strategy::ControlSystem;
    options.with_contributions = args.contributions;
    options.cross_check = !args.no_verify;
    options.tolerance = args.tolerance;
    if (!args.thevenin_port.empty()) {
        options.with_thevenin = true;
        options.port_plus = args.thevenin_port[0];
        options.port_minus = args.thevenin_port[1];
    }

    const tabsim::AnalysisReport report = tabsim::analyze(g, options);
    std::cout << (args.json ? tabsim::to_json(report) : tabsim::to_text(report));
    return report.verification_ok ? kExitOk : kExitVerification;
}

struct CheckStat {
    const char* name;
    double tolerance;
    int passed = 0;
    int failed = 0;
    double worst = 0.0;

    void record(bool ok, double deviation) {
        (ok ? passed : failed)++;
        worst = std::max(worst, deviation);
    }
};

int run_verify(const VerifyArgs& args) {
    CheckStat checks[] = {
        {"oracle agreement", 1e-8},  {"additivity", 1e-8},
        {"strategy equivalence", 1e-8}, {"sub-circuit law", 1e-9},
        {"homogeneity", 1e-9},
    };
    auto& [oracle_check, additivity_check, equivalence_check, subcircuit_check,
           homogeneity_check] = checks;

    int reported_failures = 0;
    auto report_failure = [&](const tabsim::CircuitGraph& g,
                              std::uint64_t seed, const char* what) {
        if (++reported_failures > 5) return;
        std::cerr << "FAIL " << what << " (seed " << seed
                  << "), replayable netlist:\n"
                  << tabsim::serialize(g);
    };

    for (int i = 0; i < args.count; ++i) {
        tabsim::GeneratorConfig cfg;
        cfg.seed = args.seed + static_cast<std::uint64_t>(i);
        const tabsim::CircuitGraph g = tabsim::generate(cfg);
        const tabsim::TableauSystem sys = tabsim::assemble(g);

        const tabsim::SolutionVector direct = tabsim::solve_direct(sys);
        const tabsim::Vec direct_stacked = direct.to_stacked();

        {
            const tabsim::SolutionVector nodal = tabsim::solve_nodal(g);
            const double dev =
                relative_max_deviation(nodal.to_stacked(), direct_stacked);
            const bool ok = dev <= oracle_check.tolerance;
            oracle_check.record(ok, dev);
            if (!ok) report_failure(g, cfg.seed, "oracle agreement");
        }

        const tabsim::ContributionSet via_control =
            tabsim::decompose_via_control_system(sys);
        const tabsim::ContributionSet via_full =
            tabsim::decompose_via_full_solution(sys);

        {
            const auto a = tabsim::verify_additivity(via_control);
            const auto b = tabsim::verify_additivity(via_full);
            const double dev = std::max(a.max_deviation, b.max_deviation) /
                               std::max(1.0, tabsim::max_abs(direct_stacked));
            const bool ok = a.pass && b.pass;
            additivity_check.record(ok, dev);
            if (!ok) report_failure(g, cfg.seed, "additivity");
        }
        {
            const double dev = relative_max_deviation(
                via_control.total.to_stacked(), direct_stacked);
            const bool ok = dev <= equivalence_check.tolerance;
            equivalence_check.record(ok, dev);
            if (!ok) report_failure(g, cfg.seed, "strategy equivalence");
        }
        {
            const double dev =
                std::max(tabsim::subcircuit_law_residual(sys, via_control),
                         tabsim::subcircuit_law_residual(sys, via_full));
            const bool ok = dev <= subcircuit_check.tolerance;
            subcircuit_check.record(ok, dev);
            if (!ok) report_failure(g, cfg.seed, "sub-circuit law");
        }
        {
            double dev = 0.0;
            for (double alpha : {0.0, 0.5, 3.0}) {
                tabsim::CircuitGraph scaled = g;
                for (tabsim::Branch& br : scaled.branches)
                    if (tabsim::is_independent_source(br.type))
                        br.value *= alpha;
                const tabsim::TableauSystem scaled_sys = tabsim::assemble(scaled);
                const tabsim::Vec got =
                    tabsim::solve_direct(scaled_sys).to_stacked();
                tabsim::Vec want = direct_stacked;
                for (double& v : want) v *= alpha;
                dev = std::max(dev, tabsim::max_abs_diff(got, want) /
                                        std::max(1.0, tabsim::max_abs(want)));
                if (alpha == 0.0) {
                    // With every independent source off, all parts vanish.
                    const tabsim::ContributionSet parts =
                        tabsim::decompose_via_control_system(scaled_sys);
                    dev = std::max(dev, tabsim::max_abs(tabsim::sum_of_parts(parts)));
                    dev = std::max(dev, tabsim::max_abs(parts.total.to_stacked()));
                }
            }
            const bool ok = dev <= homogeneity_check.tolerance;
            homogeneity_check.record(ok, dev);
            if (!ok) report_failure(g, cfg.seed, "homogeneity");
        }
    }

    std::cout << "verify: " << args.count << " cases, base seed " << args.seed
              << "\n";
    if (args.count == 0)
        std::cout << "  0 cases requested: vacuous pass\n";
    bool all_ok = true;
    for (const CheckStat& c : checks) {
        char line[160];
        std::snprintf(line, sizeof line,
                      "  %-22s %d/%d pass   worst deviation %.3g   (tol %.0e)\n",
                      c.name, c.passed, c.passed + c.failed, c.worst,
                      c.tolerance);
        std::cout << line;
        all_ok = all_ok && c.failed == 0;
    }
    std::cout << (all_ok ? "all checks passed\n" : "CHECKS FAILED\n");
    return all_ok ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear resistive circuit analyzer: tableau assembly with "
                 "per-source superposition, including controlled sources"};
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "Solve a netlist and report branch currents and voltages");
    analyze->add_option("netlist", analyze_args.netlist_path, "Netlist file")
        ->required();
    analyze->add_flag("--json", analyze_args.json, "Emit the JSON report");
    analyze->add_flag("--contributions", analyze_args.contributions,
                      "Add the per-source decomposition table");
    analyze->add_option("--strategy", analyze_args.strategy,
                        "Solve route: direct, full or control")
        ->check(CLI::IsMember({"direct", "full", "control"}));
    analyze->add_flag("--no-verify", analyze_args.no_verify,
                      "Skip the cross-check against the direct solve");
    analyze->add_option("--thevenin", analyze_args.thevenin_port,
                        "Thevenin equivalent at a terminal pair: PLUS MINUS")
        ->expected(2);
    analyze->add_option("--tol", analyze_args.tolerance,
                        "Comparison tolerance for verification");
    analyze->add_option("--dump-system", analyze_args.dump_prefix,
                        "Write PREFIX.L.csv and PREFIX.U.csv system dumps");

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand(
        "verify", "Run the randomized self-verification campaign");
    verify->add_option("--count", verify_args.count, "Number of random circuits")
        ->check(CLI::NonNegativeNumber);
    verify->add_option("--seed", verify_args.seed, "Base seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return run_analyze(analyze_args);
        return run_verify(verify_args);
    } catch (const tabsim::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const tabsim::SingularSystem& e) {
        std::cerr << "singular system: " << e.what() << "\n";
        return kExitSingular;
    } catch (const tabsim::VerificationError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kExitVerification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
