#ifndef TABSIM_TABLEAU_HPP
#define TABSIM_TABLEAU_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tabsim/matrix.hpp"
#include "tabsim/netlist.hpp"

namespace tabsim {

enum class RowKind { Kcl, Kvl, Constitutive };

struct RowTag {
    RowKind kind;
    /// Kcl: index into CircuitGraph::nodes; Kvl: chord branch index;
    /// Constitutive: branch index.
    int index;
};

/// One control coupling: the constitutive row of a controlled source holds
/// +1 at its own variable column and -gain at the control column.
struct ControlEntry {
    int row;      // constitutive row of the controlled source
    double gain;  // y_k
    int col;      // control column: < b means current i_m, >= b voltage v_(m-b)
};

/// The assembled 2b x 2b tableau: KCL rows (reduced incidence block), then
/// KVL rows (fundamental loop block), then one constitutive row per branch.
/// Columns 0..b-1 are branch currents, b..2b-1 branch voltages.
/// Immutable after assembly.
struct TableauSystem {
    int branch_count = 0;  // b
    Matrix L;              // 2b x 2b
    Vec U;                 // nonzero only on independent-source rows
    std::vector<RowTag> row_map;
    std::map<int, int> source_rows;  // independent source branch -> its row
    std::vector<ControlEntry> control_coeffs;
    std::vector<std::string> branch_names;
    std::vector<ElementType> branch_types;

    int dimension() const { return 2 * branch_count; }
    int current_col(int branch) const { return branch; }
    int voltage_col(int branch) const { return branch_count + branch; }
};

/// Spanning tree plus the fundamental loop closed by each chord.
struct SpanningTreeDecomposition {
    std::vector<int> tree_branches;  // ascending, size n-1
    std::vector<int> chords;         // ascending, size b-n+1
    /// Per chord, the loop as (branch, sign) pairs; the chord comes first
    /// with sign +1 and the loop follows the chord's orientation.
    std::vector<std::vector<std::pair<int, int>>> loop_of_chord;
};

/// Breadth-first tree from the reference node, branches visited in input
/// order, so the decomposition is identical across runs.
SpanningTreeDecomposition build_spanning_tree(const CircuitGraph& g);

TableauSystem assemble(const CircuitGraph& g);

/// The same system with every control coefficient entry replaced by zero:
/// each controlled source's row now reads like an independent source of
/// as-yet unknown value. U is unchanged.
TableauSystem zero_controls(const TableauSystem& sys);

std::string describe_row(const TableauSystem& sys, const CircuitGraph& g,
                         int row);

/// CSV dumps with 17 significant digits; L row-major, U one entry per line.
void dump_matrix_csv(const Matrix& m, std::ostream& out);
void dump_vector_csv(const Vec& v, std::ostream& out);

}  // namespace tabsim

#endif
