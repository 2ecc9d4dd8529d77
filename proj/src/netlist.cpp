#include "tabsim/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace tabsim {

const char* to_string(ElementType type) {
    switch (type) {
        case ElementType::Resistor: return "resistor";
        case ElementType::VoltageSource: return "vsource";
        case ElementType::CurrentSource: return "isource";
        case ElementType::Vcvs: return "vcvs";
        case ElementType::Vccs: return "vccs";
        case ElementType::Ccvs: return "ccvs";
        case ElementType::Cccs: return "cccs";
    }
    return "?";
}

char prefix_letter(ElementType type) {
    switch (type) {
        case ElementType::Resistor: return 'R';
        case ElementType::VoltageSource: return 'V';
        case ElementType::CurrentSource: return 'I';
        case ElementType::Vcvs: return 'E';
        case ElementType::Vccs: return 'G';
        case ElementType::Ccvs: return 'H';
        case ElementType::Cccs: return 'F';
    }
    return '?';
}

bool is_voltage_defined(ElementType type) {
    return type == ElementType::VoltageSource || type == ElementType::Vcvs ||
           type == ElementType::Ccvs;
}

bool is_current_defined(ElementType type) {
    return type == ElementType::CurrentSource || type == ElementType::Vccs ||
           type == ElementType::Cccs;
}

bool is_controlled(ElementType type) {
    return type == ElementType::Vcvs || type == ElementType::Vccs ||
           type == ElementType::Ccvs || type == ElementType::Cccs;
}

bool is_independent_source(ElementType type) {
    return type == ElementType::VoltageSource ||
           type == ElementType::CurrentSource;
}

bool controls_by_current(ElementType type) {
    return type == ElementType::Ccvs || type == ElementType::Cccs;
}

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

/// Decimal literal with optional sign and exponent; no SPICE unit suffixes.
bool parse_number(std::string_view token, double& out) {
    if (token.empty()) return false;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (*first == '+') ++first;  // from_chars rejects a leading '+'
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && std::isfinite(out);
}

struct PendingControl {
    int branch = -1;
    std::string name;
    int line = 0;
};

}  // namespace

int CircuitGraph::node_index(std::string_view id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] == id) return static_cast<int>(i);
    return -1;
}

int CircuitGraph::find_branch(std::string_view name) const {
    const std::string key = lower(name);
    for (std::size_t i = 0; i < branches.size(); ++i)
        if (lower(branches[i].name) == key) return static_cast<int>(i);
    return -1;
}

int CircuitGraph::add_node(const std::string& id) {
    int idx = node_index(id);
    if (idx >= 0) return idx;
    nodes.push_back(id);
    return static_cast<int>(nodes.size()) - 1;
}

int CircuitGraph::add_branch(const Branch& branch) {
    add_node(branch.node_plus);
    add_node(branch.node_minus);
    branches.push_back(branch);
    return static_cast<int>(branches.size()) - 1;
}

CircuitGraph parse_netlist(std::string_view text) {
    CircuitGraph g;
    std::vector<PendingControl> pending;
    std::unordered_map<std::string, int> names;  // lower-cased -> line

    std::istringstream stream{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        std::istringstream fields(raw);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) tok.push_back(t);
        if (tok.empty()) continue;

        Branch br;
        br.name = tok[0];
        br.line = line_no;

        const char prefix = static_cast<char>(
            std::toupper(static_cast<unsigned char>(tok[0][0])));
        switch (prefix) {
            case 'R': br.type = ElementType::Resistor; break;
            case 'V': br.type = ElementType::VoltageSource; break;
            case 'I': br.type = ElementType::CurrentSource; break;
            case 'E': br.type = ElementType::Vcvs; break;
            case 'G': br.type = ElementType::Vccs; break;
            case 'H': br.type = ElementType::Ccvs; break;
            case 'F': br.type = ElementType::Cccs; break;
            default:
                throw ParseError(ParseErrorCode::UnknownElementPrefix, line_no,
                                 "'" + tok[0] + "' (expected R/V/I/E/G/H/F)");
        }

        const std::size_t expected = is_controlled(br.type) ? 5 : 4;
        if (tok.size() != expected)
            throw ParseError(ParseErrorCode::ArityError, line_no,
                             to_string(br.type) + std::string(" takes ") +
                                 std::to_string(expected - 1) +
                                 " fields after the name, got " +
                                 std::to_string(tok.size() - 1));

        br.node_plus = tok[1];
        br.node_minus = tok[2];
        if (br.node_plus == br.node_minus)
            throw ParseError(ParseErrorCode::SelfLoop, line_no,
                             "branch '" + br.name + "' connects node '" +
                                 br.node_plus + "' to itself");

        const std::string& value_tok = tok.back();
        if (!parse_number(value_tok, br.value))
            throw ParseError(ParseErrorCode::InvalidNumber, line_no,
                             "'" + value_tok + "'");
        if (br.type == ElementType::Resistor && br.value <= 0.0)
            throw ParseError(ParseErrorCode::NonPositiveResistance, line_no,
                             "'" + br.name + "' has resistance " + value_tok);

        const std::string key = lower(br.name);
        if (auto it = names.find(key); it != names.end())
            throw ParseError(ParseErrorCode::DuplicateName, line_no,
                             "'" + br.name + "' already defined on line " +
                                 std::to_string(it->second));
        names.emplace(key, line_no);

        if (is_controlled(br.type))
            pending.push_back({g.branch_count(), tok[3], line_no});
        g.add_branch(br);
    }

    if (g.branches.empty())
        throw ParseError(ParseErrorCode::MissingGround, 1,
                         "netlist has no branches, reference node '0' never appears");
    if (g.node_index(g.reference_node) < 0)
        throw ParseError(ParseErrorCode::MissingGround, g.branches.front().line,
                         "reference node '0' never appears");

    for (const PendingControl& pc : pending) {
        const int target = g.find_branch(pc.name);
        Branch& br = g.branches[static_cast<std::size_t>(pc.branch)];
        if (target < 0)
            throw ParseError(ParseErrorCode::UnresolvedControlRef, pc.line,
                             "'" + br.name + "' references unknown branch '" +
                                 pc.name + "'");
        if (target == pc.branch)
            throw ParseError(ParseErrorCode::UnresolvedControlRef, pc.line,
                             "'" + br.name + "' may not control itself");
        br.control = target;
    }

    // Connectivity from the reference node, branches as undirected edges.
    std::vector<char> reached(g.nodes.size(), 0);
    std::vector<int> queue{g.node_index(g.reference_node)};
    reached[static_cast<std::size_t>(queue[0])] = 1;
    while (!queue.empty()) {
        const int at = queue.back();
        queue.pop_back();
        for (const Branch& br : g.branches) {
            const int p = g.node_index(br.node_plus);
            const int m = g.node_index(br.node_minus);
            int other = -1;
            if (p == at) other = m;
            else if (m == at) other = p;
            if (other >= 0 && !reached[static_cast<std::size_t>(other)]) {
                reached[static_cast<std::size_t>(other)] = 1;
                queue.push_back(other);
            }
        }
    }
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        if (reached[i]) continue;
        int line = 0;
        for (const Branch& br : g.branches)
            if (br.node_plus == g.nodes[i] || br.node_minus == g.nodes[i]) {
                line = br.line;
                break;
            }
        throw ParseError(ParseErrorCode::DisconnectedGraph, line,
                         "node '" + g.nodes[i] +
                             "' is not reachable from the reference node");
    }

    return g;
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string serialize(const CircuitGraph& g) {
    std::string out;
    for (const Branch& br : g.branches) {
        out += br.name;
        out += ' ';
        out += br.node_plus;
        out += ' ';
        out += br.node_minus;
        if (is_controlled(br.type)) {
            out += ' ';
            out += g.branches[static_cast<std::size_t>(br.control)].name;
        }
        out += ' ';
        out += format_double(br.value);
        out += '\n';
    }
    return out;
}

namespace {

/// Union-find over node indices.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }
    std::size_t find(std::size_t v) {
        while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
        return v;
    }
    /// Returns false if the endpoints were already connected.
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[a] = b;
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<TopologyWarning> validate_topology(const CircuitGraph& g) {
    std::vector<TopologyWarning> warnings;
    const std::size_t n = g.nodes.size();

    // A cycle inside the voltage-defined subgraph means some loop consists
    // solely of voltage-type branches.
    DisjointSets voltage_sets(n);
    for (const Branch& br : g.branches) {
        if (!is_voltage_defined(br.type)) continue;
        const auto p = static_cast<std::size_t>(g.node_index(br.node_plus));
        const auto m = static_cast<std::size_t>(g.node_index(br.node_minus));
        if (!voltage_sets.unite(p, m)) {
            warnings.push_back({TopologyWarningKind::VoltageLoop,
                                "loop of voltage-defined branches closed by '" +
                                    br.name + "'"});
            break;
        }
    }

    // If removing every current-defined branch disconnects the graph, the
    // removed set contains a pure current-type cutset.
    DisjointSets keep_sets(n);
    std::size_t components = n;
    for (const Branch& br : g.branches) {
        if (is_current_defined(br.type)) continue;
        const auto p = static_cast<std::size_t>(g.node_index(br.node_plus));
        const auto m = static_cast<std::size_t>(g.node_index(br.node_minus));
        if (keep_sets.unite(p, m)) --components;
    }
    if (components > 1)
        warnings.push_back({TopologyWarningKind::CurrentCutset,
                            "current-defined branches form a cutset"});

    return warnings;
}

}  // namespace tabsim
