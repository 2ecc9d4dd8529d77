#include "tabsim/thevenin.hpp"

#include <cmath>
#include <stdexcept>

namespace tabsim {

namespace {

constexpr double kLoadLineTolerance = 1e-8;

void require_port(const CircuitGraph& g, const std::string& plus,
                  const std::string& minus) {
    if (plus == minus)
        throw std::invalid_argument("terminal pair must name two distinct nodes");
    if (g.node_index(plus) < 0)
        throw std::invalid_argument("unknown terminal node '" + plus + "'");
    if (g.node_index(minus) < 0)
        throw std::invalid_argument("unknown terminal node '" + minus + "'");
}

std::string unique_name(const CircuitGraph& g, const std::string& stem) {
    if (g.find_branch(stem) < 0) return stem;
    for (int i = 2;; ++i) {
        const std::string candidate = stem + std::to_string(i);
        if (g.find_branch(candidate) < 0) return candidate;
    }
}

PortAnalysis analyze_with_probe(CircuitGraph circuit, const std::string& plus,
                                const std::string& minus, double probe_amps) {
    Branch probe;
    probe.name = unique_name(circuit, "IPROBE");
    probe.node_plus = plus;
    probe.node_minus = minus;
    probe.type = ElementType::CurrentSource;
    probe.value = probe_amps;

    PortAnalysis result;
    result.probe_branch = circuit.add_branch(probe);
    result.contributions = decompose_via_control_system(assemble(circuit));
    result.circuit = std::move(circuit);
    return result;
}

}  // namespace

PortAnalysis open_circuit_analysis(const CircuitGraph& g,
                                   const std::string& plus,
                                   const std::string& minus) {
    require_port(g, plus, minus);
    return analyze_with_probe(g, plus, minus, 0.0);
}

PortAnalysis resistance_analysis(const CircuitGraph& g,
                                 const std::string& plus,
                                 const std::string& minus) {
    require_port(g, plus, minus);
    CircuitGraph quiet = g;
    for (Branch& br : quiet.branches)
        if (is_independent_source(br.type)) br.value = 0.0;
    // value -1 pushes 1 A out of the probe's minus side, i.e. into `plus`,
    // so the probe's own branch voltage reads R_eq directly.
    return analyze_with_probe(std::move(quiet), plus, minus, -1.0);
}

double open_circuit_voltage(const CircuitGraph& g, const std::string& plus,
                            const std::string& minus) {
    const PortAnalysis analysis = open_circuit_analysis(g, plus, minus);
    return analysis.contributions.total
        .voltages[static_cast<std::size_t>(analysis.probe_branch)];
}

double equivalent_resistance(const CircuitGraph& g, const std::string& plus,
                             const std::string& minus) {
    const PortAnalysis analysis = resistance_analysis(g, plus, minus);
    return analysis.contributions.total
        .voltages[static_cast<std::size_t>(analysis.probe_branch)];
}

TheveninEquivalent thevenin(const CircuitGraph& g, const std::string& plus,
                            const std::string& minus) {
    TheveninEquivalent eq;
    eq.v_open = open_circuit_voltage(g, plus, minus);
    eq.r_eq = equivalent_resistance(g, plus, minus);
    eq.terminal_plus = plus;
    eq.terminal_minus = minus;

    for (double load_ohms : {1.0, 10.0, 100.0}) {
        CircuitGraph loaded = g;
        Branch load;
        load.name = unique_name(loaded, "RLOAD");
        load.node_plus = plus;
        load.node_minus = minus;
        load.type = ElementType::Resistor;
        load.value = load_ohms;
        const int idx = loaded.add_branch(load);

        SolutionVector x;
        try {
            x = solve_direct(assemble(loaded));
        } catch (const SingularSystem&) {
            continue;  // load exactly cancels r_eq; nothing to compare
        }
        const double v = x.voltages[static_cast<std::size_t>(idx)];
        const double i = x.currents[static_cast<std::size_t>(idx)];
        const double predicted = eq.v_open - eq.r_eq * i;
        const double scale =
            std::max({1.0, std::abs(v), std::abs(predicted)});
        if (std::abs(v - predicted) > kLoadLineTolerance * scale)
            throw VerificationError(
                "load line violated at " + format_double(load_ohms) +
                " ohm: terminal voltage " + format_double(v) +
                ", predicted " + format_double(predicted));
    }
    return eq;
}

}  // namespace tabsim
