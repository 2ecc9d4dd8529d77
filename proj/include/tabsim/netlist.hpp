#ifndef TABSIM_NETLIST_HPP
#define TABSIM_NETLIST_HPP

#include <string>
#include <string_view>
#include <vector>

#include "tabsim/errors.hpp"

namespace tabsim {

/// Element kinds. The netlist prefix letter selects the kind:
/// R, V, I, E (VCVS), G (VCCS), H (CCVS), F (CCCS).
enum class ElementType {
    Resistor,
    VoltageSource,
    CurrentSource,
    Vcvs,  // voltage-controlled voltage source, gain dimensionless
    Vccs,  // voltage-controlled current source, gain in siemens
    Ccvs,  // current-controlled voltage source, gain in ohms
    Cccs,  // current-controlled current source, gain dimensionless
};

const char* to_string(ElementType type);
char prefix_letter(ElementType type);

/// Branch voltage is fixed by the element (independent V, VCVS, CCVS).
bool is_voltage_defined(ElementType type);
/// Branch current is fixed by the element (independent I, VCCS, CCCS).
bool is_current_defined(ElementType type);
bool is_controlled(ElementType type);
bool is_independent_source(ElementType type);
/// Controlled source whose control variable is a branch current.
bool controls_by_current(ElementType type);

/// One oriented circuit branch. Associated (passive) reference directions:
/// v = v(node_plus) - v(node_minus), current reference flows
/// node_plus -> node_minus through the element.
struct Branch {
    std::string name;
    std::string node_plus;
    std::string node_minus;
    ElementType type = ElementType::Resistor;
    /// Resistance (ohms), source value (V or A), or control gain.
    double value = 0.0;
    /// Index of the controlling branch; -1 for uncontrolled elements.
    int control = -1;
    /// 1-based netlist line this branch came from (0 if built in memory).
    int line = 0;
};

/// Oriented branches over named nodes. Node "0" is always the reference.
struct CircuitGraph {
    std::vector<std::string> nodes;  // first-appearance order, includes "0"
    std::vector<Branch> branches;
    std::string reference_node = "0";

    int node_count() const { return static_cast<int>(nodes.size()); }
    int branch_count() const { return static_cast<int>(branches.size()); }

    /// Index into nodes, or -1.
    int node_index(std::string_view id) const;
    /// Branch index by case-insensitive name, or -1.
    int find_branch(std::string_view name) const;

    /// Registers the node id if new; returns its index.
    int add_node(const std::string& id);
    /// Appends a branch, registering its nodes. Caller keeps the invariants;
    /// parse_netlist is the checked path.
    int add_branch(const Branch& branch);
};

/// Parse the line-oriented netlist format. '#' starts a comment, blank lines
/// are ignored, tokens are whitespace-separated:
///
///   R<name> n+ n- resistance        resistance > 0
///   V<name> n+ n- volts
///   I<name> n+ n- amperes
///   E<name> n+ n- control gain     v = gain * v(control)
///   G<name> n+ n- control gain     i = gain * v(control)
///   H<name> n+ n- control gain     v = gain * i(control)
///   F<name> n+ n- control gain     i = gain * i(control)
///
/// Controlled sources name the controlling *branch*, not a node pair.
/// Throws ParseError with a 1-based line number on malformed or
/// topologically invalid input.
CircuitGraph parse_netlist(std::string_view text);

/// Canonical netlist text for the graph: one line per branch in index order,
/// numbers printed with 17 significant digits. parse(serialize(g))
/// reproduces g.
std::string serialize(const CircuitGraph& g);

enum class TopologyWarningKind { VoltageLoop, CurrentCutset };

struct TopologyWarning {
    TopologyWarningKind kind;
    std::string message;
};

/// Necessary-condition screen for ill-posed topologies: loops made only of
/// voltage-defined branches and cutsets made only of current-defined
/// branches. The definitive check is the solver's pivot test.
std::vector<TopologyWarning> validate_topology(const CircuitGraph& g);

/// Lossless numeric formatting used by serialize/report code (%.17g).
std::string format_double(double value);

}  // namespace tabsim

#endif
