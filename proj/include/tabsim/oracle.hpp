#ifndef TABSIM_ORACLE_HPP
#define TABSIM_ORACLE_HPP

#include <cstdint>

#include "tabsim/superposition.hpp"

namespace tabsim {

/// Node-voltage formulation used as the cross-check path. Unknowns are the
/// non-reference node voltages plus the currents of voltage-defined branches
/// (and of any current-controlled source's control branch that is not a
/// resistor, whose current cannot be written in node voltages).
struct NodalSystem {
    Matrix coefficients;
    Vec rhs;
    int node_unknowns = 0;                // n - 1
    std::vector<int> current_unknowns;    // branch indices, ascending
};

NodalSystem build_nodal(const CircuitGraph& g);

/// Solve by nodal analysis and map back to the per-branch (i, v) layout.
/// Deliberately a different formulation from the tableau route, so agreement
/// between the two is a genuine cross-check.
SolutionVector solve_nodal(const CircuitGraph& g);

/// Relative element-mix weights for the random generator.
struct ElementMix {
    double resistor = 6.0;
    double voltage_source = 2.0;
    double current_source = 1.0;
    double vcvs = 0.75;
    double vccs = 0.75;
    double ccvs = 0.75;
    double cccs = 0.75;
};

struct GeneratorConfig {
    int min_nodes = 2;
    int max_nodes = 8;
    int min_extra_chords = 0;
    int max_extra_chords = 4;
    ElementMix mix{};
    double min_resistance = 1.0;
    double max_resistance = 1e3;
    double max_source_voltage = 10.0;  // values drawn from [-max, max]
    double max_source_current = 1.0;
    double max_gain = 2.0;
    int max_controlled_sources = 4;
    std::uint64_t seed = 0;
};

/// Random connected circuit: random spanning tree first, extra chords after.
/// Instances whose tableau L or zeroed-control L trip the singularity
/// threshold are resampled, up to 100 tries, so emitted circuits are
/// well-posed for both decomposition strategies. Same seed, same circuit.
CircuitGraph generate(const GeneratorConfig& cfg);

}  // namespace tabsim

#endif
