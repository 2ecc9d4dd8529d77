#include "tabsim/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <random>
#include <string>

#include "tabsim/tableau.hpp"

namespace tabsim {

namespace {

/// Sparse linear form over the nodal unknowns plus a constant term.
struct LinForm {
    std::map<int, double> coeffs;
    double constant = 0.0;

    LinForm& add(int col, double c) {
        if (col >= 0) coeffs[col] += c;
        return *this;
    }
    LinForm scaled(double s) const {
        LinForm out;
        out.constant = constant * s;
        for (const auto& [col, c] : coeffs) out.coeffs[col] = c * s;
        return out;
    }
    double evaluate(const Vec& x) const {
        double value = constant;
        for (const auto& [col, c] : coeffs)
            value += c * x[static_cast<std::size_t>(col)];
        return value;
    }
};

struct NodalLayout {
    std::vector<int> node_col;          // per node index, -1 for reference
    std::map<int, int> current_col;     // branch index -> column
    int total = 0;
};

NodalLayout make_layout(const CircuitGraph& g) {
    NodalLayout layout;
    layout.node_col.assign(g.nodes.size(), -1);
    int col = 0;
    for (std::size_t v = 0; v < g.nodes.size(); ++v)
        if (g.nodes[v] != g.reference_node)
            layout.node_col[v] = col++;

    // Current unknowns: voltage-defined branches always; control branches of
    // current-controlled sources unless their current has a conductance form.
    std::vector<char> needs(g.branches.size(), 0);
    for (std::size_t j = 0; j < g.branches.size(); ++j) {
        const Branch& br = g.branches[j];
        if (is_voltage_defined(br.type)) needs[j] = 1;
        if (controls_by_current(br.type)) {
            const auto ctrl = static_cast<std::size_t>(br.control);
            if (g.branches[ctrl].type != ElementType::Resistor) needs[ctrl] = 1;
        }
    }
    for (std::size_t j = 0; j < g.branches.size(); ++j)
        if (needs[j]) layout.current_col.emplace(static_cast<int>(j), col++);
    layout.total = col;
    return layout;
}

LinForm voltage_form(const CircuitGraph& g, const NodalLayout& layout, int j) {
    const Branch& br = g.branches[static_cast<std::size_t>(j)];
    LinForm form;
    form.add(layout.node_col[static_cast<std::size_t>(g.node_index(br.node_plus))], 1.0);
    form.add(layout.node_col[static_cast<std::size_t>(g.node_index(br.node_minus))], -1.0);
    return form;
}

LinForm current_form(const CircuitGraph& g, const NodalLayout& layout, int j) {
    const Branch& br = g.branches[static_cast<std::size_t>(j)];
    if (auto it = layout.current_col.find(j); it != layout.current_col.end()) {
        LinForm form;
        form.add(it->second, 1.0);
        return form;
    }
    switch (br.type) {
        case ElementType::Resistor:
            return voltage_form(g, layout, j).scaled(1.0 / br.value);
        case ElementType::CurrentSource: {
            LinForm form;
            form.constant = br.value;
            return form;
        }
        case ElementType::Vccs:
            return voltage_form(g, layout, br.control).scaled(br.value);
        case ElementType::Cccs:
            // The control is either a resistor or carries its own unknown,
            // so this recursion terminates after one step.
            return current_form(g, layout, br.control).scaled(br.value);
        default:
            assert(!"voltage-defined branch without a current unknown");
            return {};
    }
}

void stamp(Matrix& a, Vec& rhs, int row, const LinForm& form, double sign) {
    for (const auto& [col, c] : form.coeffs)
        a(static_cast<std::size_t>(row), static_cast<std::size_t>(col)) += sign * c;
    rhs[static_cast<std::size_t>(row)] -= sign * form.constant;
}

}  // namespace

NodalSystem build_nodal(const CircuitGraph& g) {
    const NodalLayout layout = make_layout(g);
    NodalSystem sys;
    sys.node_unknowns = g.node_count() - 1;
    for (const auto& [branch, col] : layout.current_col)
        sys.current_unknowns.push_back(branch);
    sys.coefficients = Matrix(static_cast<std::size_t>(layout.total),
                              static_cast<std::size_t>(layout.total));
    sys.rhs.assign(static_cast<std::size_t>(layout.total), 0.0);

    // KCL rows: currents leaving each non-reference node sum to zero.
    for (int j = 0; j < g.branch_count(); ++j) {
        const Branch& br = g.branches[static_cast<std::size_t>(j)];
        const LinForm current = current_form(g, layout, j);
        const int prow = layout.node_col[static_cast<std::size_t>(
            g.node_index(br.node_plus))];
        const int mrow = layout.node_col[static_cast<std::size_t>(
            g.node_index(br.node_minus))];
        if (prow >= 0) stamp(sys.coefficients, sys.rhs, prow, current, 1.0);
        if (mrow >= 0) stamp(sys.coefficients, sys.rhs, mrow, current, -1.0);
    }

    // One constitutive row per current unknown.
    for (const auto& [j, col] : layout.current_col) {
        const int row = col;  // current columns start right after the nodes
        const Branch& br = g.branches[static_cast<std::size_t>(j)];
        switch (br.type) {
            case ElementType::VoltageSource:
                stamp(sys.coefficients, sys.rhs, row, voltage_form(g, layout, j), 1.0);
                sys.rhs[static_cast<std::size_t>(row)] += br.value;
                break;
            case ElementType::Vcvs:
                stamp(sys.coefficients, sys.rhs, row, voltage_form(g, layout, j), 1.0);
                stamp(sys.coefficients, sys.rhs, row,
                      voltage_form(g, layout, br.control).scaled(br.value), -1.0);
                break;
            case ElementType::Ccvs:
                stamp(sys.coefficients, sys.rhs, row, voltage_form(g, layout, j), 1.0);
                stamp(sys.coefficients, sys.rhs, row,
                      current_form(g, layout, br.control).scaled(br.value), -1.0);
                break;
            case ElementType::CurrentSource: {
                // Forced unknown (some source reads this current): i = value.
                LinForm own;
                own.add(col, 1.0);
                stamp(sys.coefficients, sys.rhs, row, own, 1.0);
                sys.rhs[static_cast<std::size_t>(row)] += br.value;
                break;
            }
            case ElementType::Vccs: {
                LinForm own;
                own.add(col, 1.0);
                stamp(sys.coefficients, sys.rhs, row, own, 1.0);
                stamp(sys.coefficients, sys.rhs, row,
                      voltage_form(g, layout, br.control).scaled(br.value), -1.0);
                break;
            }
            case ElementType::Cccs: {
                LinForm own;
                own.add(col, 1.0);
                stamp(sys.coefficients, sys.rhs, row, own, 1.0);
                stamp(sys.coefficients, sys.rhs, row,
                      current_form(g, layout, br.control).scaled(br.value), -1.0);
                break;
            }
            case ElementType::Resistor:
                assert(!"resistor currents use the conductance form");
                break;
        }
    }

    return sys;
}

SolutionVector solve_nodal(const CircuitGraph& g) {
    const NodalLayout layout = make_layout(g);
    const NodalSystem sys = build_nodal(g);
    const LuFactorization f =
        factor(sys.coefficients, SingularContext::NodalSystem);
    const Vec x = solve(f, sys.rhs);

    SolutionVector out;
    out.currents.resize(static_cast<std::size_t>(g.branch_count()));
    out.voltages.resize(static_cast<std::size_t>(g.branch_count()));
    for (int j = 0; j < g.branch_count(); ++j) {
        out.currents[static_cast<std::size_t>(j)] =
            current_form(g, layout, j).evaluate(x);
        out.voltages[static_cast<std::size_t>(j)] =
            voltage_form(g, layout, j).evaluate(x);
    }
    return out;
}

namespace {

ElementType draw_kind(const GeneratorConfig& cfg, std::mt19937_64& rng,
                      bool allow_controlled) {
    const ElementMix& mix = cfg.mix;
    double weights[7] = {mix.resistor, mix.voltage_source, mix.current_source,
                         mix.vcvs, mix.vccs, mix.ccvs, mix.cccs};
    if (!allow_controlled) weights[3] = weights[4] = weights[5] = weights[6] = 0.0;
    std::discrete_distribution<int> pick(std::begin(weights), std::end(weights));
    constexpr ElementType kinds[7] = {
        ElementType::Resistor,     ElementType::VoltageSource,
        ElementType::CurrentSource, ElementType::Vcvs,
        ElementType::Vccs,          ElementType::Ccvs,
        ElementType::Cccs};
    return kinds[pick(rng)];
}

CircuitGraph generate_once(const GeneratorConfig& cfg, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> node_count_dist(cfg.min_nodes,
                                                       cfg.max_nodes);
    std::uniform_int_distribution<int> chord_count_dist(cfg.min_extra_chords,
                                                        cfg.max_extra_chords);
    const int n = node_count_dist(rng);
    const int extra = chord_count_dist(rng);

    // Random spanning tree: each new node attaches to an existing one.
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> pick_existing(0, v - 1);
        int u = pick_existing(rng);
        if (std::bernoulli_distribution(0.5)(rng)) edges.emplace_back(v, u);
        else edges.emplace_back(u, v);
    }
    for (int c = 0; c < extra; ++c) {
        std::uniform_int_distribution<int> pick_node(0, n - 1);
        const int u = pick_node(rng);
        int v = pick_node(rng);
        while (v == u) v = pick_node(rng);
        edges.emplace_back(u, v);
    }

    const int b = static_cast<int>(edges.size());
    CircuitGraph g;
    g.add_node("0");

    std::uniform_real_distribution<double> resistance(cfg.min_resistance,
                                                      cfg.max_resistance);
    std::uniform_real_distribution<double> volts(-cfg.max_source_voltage,
                                                 cfg.max_source_voltage);
    std::uniform_real_distribution<double> amps(-cfg.max_source_current,
                                                cfg.max_source_current);
    std::uniform_real_distribution<double> gain(-cfg.max_gain, cfg.max_gain);

    int controlled_used = 0;
    std::map<char, int> counters;
    std::vector<int> control_pending;  // branch indices awaiting a control

    for (int j = 0; j < b; ++j) {
        const bool allow_controlled =
            b >= 2 && controlled_used < cfg.max_controlled_sources;
        const ElementType kind = draw_kind(cfg, rng, allow_controlled);

        Branch br;
        br.type = kind;
        br.node_plus = std::to_string(edges[static_cast<std::size_t>(j)].first);
        br.node_minus = std::to_string(edges[static_cast<std::size_t>(j)].second);
        br.name = prefix_letter(kind) + std::to_string(++counters[prefix_letter(kind)]);
        switch (kind) {
            case ElementType::Resistor: br.value = resistance(rng); break;
            case ElementType::VoltageSource: br.value = volts(rng); break;
            case ElementType::CurrentSource: br.value = amps(rng); break;
            default:
                br.value = gain(rng);
                ++controlled_used;
                control_pending.push_back(j);
                break;
        }
        g.add_branch(br);
    }

    // Controls are assigned after all branches exist so any branch may serve.
    for (int j : control_pending) {
        std::uniform_int_distribution<int> pick_other(0, b - 2);
        int target = pick_other(rng);
        if (target >= j) ++target;
        g.branches[static_cast<std::size_t>(j)].control = target;
    }
    return g;
}

}  // namespace

CircuitGraph generate(const GeneratorConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    constexpr int kMaxTries = 100;
    for (int attempt = 0; attempt < kMaxTries; ++attempt) {
        CircuitGraph g = generate_once(cfg, rng);
        try {
            const TableauSystem sys = assemble(g);
            factor(sys.L, SingularContext::FullSystem);
            factor(zero_controls(sys).L, SingularContext::ZeroedControls);
            return g;
        } catch (const SingularSystem&) {
            continue;  // ill-posed draw, resample
        }
    }
    throw GenerationExhausted(
        "no well-posed circuit in 100 tries (seed " +
        std::to_string(cfg.seed) + ")");
}

}  // namespace tabsim
