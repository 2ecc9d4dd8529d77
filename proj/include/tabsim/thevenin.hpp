#ifndef TABSIM_THEVENIN_HPP
#define TABSIM_THEVENIN_HPP

#include <string>

#include "tabsim/superposition.hpp"

namespace tabsim {

struct TheveninEquivalent {
    double v_open = 0.0;  // open-circuit voltage, plus terminal first
    double r_eq = 0.0;    // may be negative for active networks
    std::string terminal_plus;
    std::string terminal_minus;
};

/// Result of one port sub-analysis: the augmented circuit, the probe branch
/// appended to read the terminal quantity, and the full per-source
/// decomposition of the augmented circuit.
struct PortAnalysis {
    CircuitGraph circuit;
    int probe_branch = -1;
    ContributionSet contributions;
};

/// Attach a zero-current probe branch across (plus, minus) and decompose.
/// The open-circuit voltage is the probe's branch voltage; each source's
/// contribution to it is available per part.
PortAnalysis open_circuit_analysis(const CircuitGraph& g,
                                   const std::string& plus,
                                   const std::string& minus);

/// Zero every independent source value (topology kept, controlled sources
/// stay active), drive a 1 A test current into `plus` and out of `minus`;
/// the equivalent resistance is the probe's branch voltage.
PortAnalysis resistance_analysis(const CircuitGraph& g,
                                 const std::string& plus,
                                 const std::string& minus);

double open_circuit_voltage(const CircuitGraph& g, const std::string& plus,
                            const std::string& minus);
double equivalent_resistance(const CircuitGraph& g, const std::string& plus,
                             const std::string& minus);

/// Both port quantities, then a load-line verification: for probe loads of
/// 1, 10 and 100 ohms the solved terminal pair must satisfy
/// v = v_open - r_eq * i (current out of the plus terminal) within 1e-8
/// relative. A violation is escalated as VerificationError.
TheveninEquivalent thevenin(const CircuitGraph& g, const std::string& plus,
                            const std::string& minus);

}  // namespace tabsim

#endif
