#ifndef TABSIM_REPORT_HPP
#define TABSIM_REPORT_HPP

#include <string>
#include <utility>
#include <vector>

#include "tabsim/superposition.hpp"
#include "tabsim/thevenin.hpp"

namespace tabsim {

enum class Strategy { Direct, FullSolution, ControlSystem };

const char* to_string(Strategy s);

struct AnalysisOptions {
    Strategy strategy = Strategy::ControlSystem;
    bool with_contributions = false;
    /// Cross-check the decomposition total against the direct solve.
    bool cross_check = true;
    double tolerance = 1e-8;
    bool with_thevenin = false;
    std::string port_plus;
    std::string port_minus;
};

/// Everything one analyze run produced. Row sums of the contribution table
/// reproduce the totals column within the additivity tolerance.
struct AnalysisReport {
    CircuitGraph graph;
    SolutionVector solution;
    Strategy strategy = Strategy::ControlSystem;

    bool has_contributions = false;
    ContributionSet contributions;

    bool has_thevenin = false;
    TheveninEquivalent thevenin;
    /// Per-source contribution to the open-circuit voltage, report order.
    std::vector<std::pair<std::string, double>> v_open_parts;

    double solve_residual = 0.0;
    bool has_additivity = false;
    double additivity_deviation = 0.0;
    bool additivity_ok = true;
    bool cross_checked = false;
    double cross_check_deviation = 0.0;
    bool verification_ok = true;

    std::vector<TopologyWarning> warnings;
};

AnalysisReport analyze(const CircuitGraph& g, const AnalysisOptions& options);

/// Human-readable table (9 significant digits).
std::string to_text(const AnalysisReport& report);

/// JSON with the fixed key set {strategy, branches, contributions, thevenin,
/// residuals}; numbers carry 17 significant digits.
std::string to_json(const AnalysisReport& report);

}  // namespace tabsim

#endif
