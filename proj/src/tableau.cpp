#include "tabsim/tableau.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <ostream>

namespace tabsim {

namespace {

struct TreeScaffold {
    std::vector<int> parent_node;    // per node index, -1 at the root
    std::vector<int> parent_branch;  // branch to the parent
    std::vector<int> depth;
};

/// Sign of traversing `branch` from node `from`: +1 when the walk follows
/// the branch's plus->minus orientation.
int traversal_sign(const CircuitGraph& g, const Branch& branch, int from) {
    return g.node_index(branch.node_plus) == from ? 1 : -1;
}

}  // namespace

SpanningTreeDecomposition build_spanning_tree(const CircuitGraph& g) {
    const int n = g.node_count();
    const int b = g.branch_count();
    const int root = g.node_index(g.reference_node);
    assert(root >= 0);

    std::vector<std::pair<int, int>> endpoints(static_cast<std::size_t>(b));
    for (int j = 0; j < b; ++j)
        endpoints[static_cast<std::size_t>(j)] = {
            g.node_index(g.branches[static_cast<std::size_t>(j)].node_plus),
            g.node_index(g.branches[static_cast<std::size_t>(j)].node_minus)};

    TreeScaffold scaffold;
    scaffold.parent_node.assign(static_cast<std::size_t>(n), -1);
    scaffold.parent_branch.assign(static_cast<std::size_t>(n), -1);
    scaffold.depth.assign(static_cast<std::size_t>(n), -1);
    scaffold.depth[static_cast<std::size_t>(root)] = 0;

    std::vector<char> in_tree(static_cast<std::size_t>(b), 0);
    std::deque<int> frontier{root};
    while (!frontier.empty()) {
        const int at = frontier.front();
        frontier.pop_front();
        for (int j = 0; j < b; ++j) {
            const auto [p, m] = endpoints[static_cast<std::size_t>(j)];
            int other = -1;
            if (p == at) other = m;
            else if (m == at) other = p;
            if (other < 0 || scaffold.depth[static_cast<std::size_t>(other)] >= 0)
                continue;
            scaffold.depth[static_cast<std::size_t>(other)] =
                scaffold.depth[static_cast<std::size_t>(at)] + 1;
            scaffold.parent_node[static_cast<std::size_t>(other)] = at;
            scaffold.parent_branch[static_cast<std::size_t>(other)] = j;
            in_tree[static_cast<std::size_t>(j)] = 1;
            frontier.push_back(other);
        }
    }

    SpanningTreeDecomposition d;
    for (int j = 0; j < b; ++j)
        (in_tree[static_cast<std::size_t>(j)] ? d.tree_branches : d.chords)
            .push_back(j);
    assert(static_cast<int>(d.tree_branches.size()) == n - 1);

    // Fundamental loop per chord: traverse the chord plus->minus, then climb
    // the tree from node_minus back to node_plus.
    for (int chord : d.chords) {
        const auto [cp, cm] = endpoints[static_cast<std::size_t>(chord)];
        std::vector<std::pair<int, int>> loop{{chord, 1}};

        std::vector<std::pair<int, int>> ascent_from;  // cm upward
        std::vector<std::pair<int, int>> ascent_to;    // cp upward
        int a = cm;
        int c = cp;
        auto climb = [&](int& node, std::vector<std::pair<int, int>>& steps) {
            const int branch =
                scaffold.parent_branch[static_cast<std::size_t>(node)];
            steps.emplace_back(
                branch,
                traversal_sign(g, g.branches[static_cast<std::size_t>(branch)],
                               node));
            node = scaffold.parent_node[static_cast<std::size_t>(node)];
        };
        while (scaffold.depth[static_cast<std::size_t>(a)] >
               scaffold.depth[static_cast<std::size_t>(c)])
            climb(a, ascent_from);
        while (scaffold.depth[static_cast<std::size_t>(c)] >
               scaffold.depth[static_cast<std::size_t>(a)])
            climb(c, ascent_to);
        while (a != c) {
            climb(a, ascent_from);
            climb(c, ascent_to);
        }

        loop.insert(loop.end(), ascent_from.begin(), ascent_from.end());
        // The cp-side steps run against the traversal direction.
        for (auto it = ascent_to.rbegin(); it != ascent_to.rend(); ++it)
            loop.emplace_back(it->first, -it->second);
        d.loop_of_chord.push_back(std::move(loop));
    }
    return d;
}

TableauSystem assemble(const CircuitGraph& g) {
    const int b = g.branch_count();

    TableauSystem sys;
    sys.branch_count = b;
    sys.L = Matrix(static_cast<std::size_t>(2 * b), static_cast<std::size_t>(2 * b));
    sys.U.assign(static_cast<std::size_t>(2 * b), 0.0);
    sys.row_map.reserve(static_cast<std::size_t>(2 * b));
    for (const Branch& br : g.branches) {
        sys.branch_names.push_back(br.name);
        sys.branch_types.push_back(br.type);
    }

    // KCL block: one row per non-reference node in first-appearance order.
    std::vector<int> kcl_row_of_node(g.nodes.size(), -1);
    int row = 0;
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        if (g.nodes[v] == g.reference_node) continue;
        kcl_row_of_node[v] = row;
        sys.row_map.push_back({RowKind::Kcl, static_cast<int>(v)});
        ++row;
    }
    for (int j = 0; j < b; ++j) {
        const Branch& br = g.branches[static_cast<std::size_t>(j)];
        const int p = kcl_row_of_node[static_cast<std::size_t>(
            g.node_index(br.node_plus))];
        const int m = kcl_row_of_node[static_cast<std::size_t>(
            g.node_index(br.node_minus))];
        if (p >= 0) sys.L(static_cast<std::size_t>(p), static_cast<std::size_t>(j)) = 1.0;
        if (m >= 0) sys.L(static_cast<std::size_t>(m), static_cast<std::size_t>(j)) = -1.0;
    }

    // KVL block: one row per chord, voltage columns only.
    const SpanningTreeDecomposition tree = build_spanning_tree(g);
    for (std::size_t c = 0; c < tree.chords.size(); ++c) {
        sys.row_map.push_back({RowKind::Kvl, tree.chords[c]});
        for (const auto& [branch, sign] : tree.loop_of_chord[c])
            sys.L(static_cast<std::size_t>(row),
                  static_cast<std::size_t>(b + branch)) = sign;
        ++row;
    }
    assert(row == b);

    // Constitutive block, one row per branch in branch-index order.
    for (int j = 0; j < b; ++j) {
        const Branch& br = g.branches[static_cast<std::size_t>(j)];
        const auto r = static_cast<std::size_t>(b + j);
        sys.row_map.push_back({RowKind::Constitutive, j});
        const auto icol = static_cast<std::size_t>(sys.current_col(j));
        const auto vcol = static_cast<std::size_t>(sys.voltage_col(j));
        switch (br.type) {
            case ElementType::Resistor:
                sys.L(r, icol) = -br.value;
                sys.L(r, vcol) = 1.0;
                break;
            case ElementType::VoltageSource:
                sys.L(r, vcol) = 1.0;
                sys.U[r] = br.value;
                sys.source_rows[j] = static_cast<int>(r);
                break;
            case ElementType::CurrentSource:
                sys.L(r, icol) = 1.0;
                sys.U[r] = br.value;
                sys.source_rows[j] = static_cast<int>(r);
                break;
            case ElementType::Vcvs:
            case ElementType::Vccs:
            case ElementType::Ccvs:
            case ElementType::Cccs: {
                const bool voltage_output = is_voltage_defined(br.type);
                sys.L(r, voltage_output ? vcol : icol) = 1.0;
                const int ctrl_col = controls_by_current(br.type)
                                         ? sys.current_col(br.control)
                                         : sys.voltage_col(br.control);
                sys.L(r, static_cast<std::size_t>(ctrl_col)) = -br.value;
                sys.control_coeffs.push_back(
                    {static_cast<int>(r), br.value, ctrl_col});
                break;
            }
        }
    }

    return sys;
}

TableauSystem zero_controls(const TableauSystem& sys) {
    TableauSystem zeroed = sys;
    for (const ControlEntry& entry : sys.control_coeffs)
        zeroed.L(static_cast<std::size_t>(entry.row),
                 static_cast<std::size_t>(entry.col)) = 0.0;
    return zeroed;
}

std::string describe_row(const TableauSystem& sys, const CircuitGraph& g,
                         int row) {
    const RowTag tag = sys.row_map[static_cast<std::size_t>(row)];
    switch (tag.kind) {
        case RowKind::Kcl:
            return "KCL at node " + g.nodes[static_cast<std::size_t>(tag.index)];
        case RowKind::Kvl:
            return "KVL for chord " +
                   sys.branch_names[static_cast<std::size_t>(tag.index)];
        case RowKind::Constitutive:
            return "constitutive for " +
                   sys.branch_names[static_cast<std::size_t>(tag.index)];
    }
    return "?";
}

void dump_matrix_csv(const Matrix& m, std::ostream& out) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << format_double(m(r, c));
        }
        out << '\n';
    }
}

void dump_vector_csv(const Vec& v, std::ostream& out) {
    for (double x : v) out << format_double(x) << '\n';
}

}  // namespace tabsim
