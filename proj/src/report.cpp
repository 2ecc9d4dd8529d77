#include "tabsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace tabsim {

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::Direct: return "direct";
        case Strategy::FullSolution: return "full";
        case Strategy::ControlSystem: return "control";
    }
    return "?";
}

namespace {

double relative_max_deviation(const Vec& got, const Vec& want) {
    return max_abs_diff(got, want) / std::max(1.0, max_abs(want));
}

std::string short_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

std::string jstr(const std::string& s) { return '"' + json_escape(s) + '"'; }

/// Sources in report order: independent parts first, then controlled, both
/// by branch index.
std::vector<std::pair<int, bool>> source_order(const ContributionSet& cs) {
    std::vector<std::pair<int, bool>> order;
    for (const auto& [branch, part] : cs.independent) order.emplace_back(branch, false);
    for (const auto& [branch, part] : cs.controlled) order.emplace_back(branch, true);
    return order;
}

}  // namespace

AnalysisReport analyze(const CircuitGraph& g, const AnalysisOptions& options) {
    AnalysisReport report;
    report.graph = g;
    report.strategy = options.strategy;
    report.warnings = validate_topology(g);

    const TableauSystem sys = assemble(g);

    const bool decompose = options.strategy != Strategy::Direct ||
                           options.with_contributions;
    if (decompose) {
        report.contributions = options.strategy == Strategy::ControlSystem
                                   ? decompose_via_control_system(sys)
                                   : decompose_via_full_solution(sys);
        report.has_contributions = true;
        report.solution = report.contributions.total;

        const AdditivityReport additivity =
            verify_additivity(report.contributions, options.tolerance);
        report.has_additivity = true;
        report.additivity_deviation = additivity.max_deviation;
        report.additivity_ok = additivity.pass;
    }

    if (options.strategy == Strategy::Direct) {
        report.solution = solve_direct(sys);
    } else if (options.cross_check) {
        const SolutionVector direct = solve_direct(sys);
        report.cross_checked = true;
        report.cross_check_deviation = relative_max_deviation(
            report.solution.to_stacked(), direct.to_stacked());
    }

    const Vec residual = sys.L.multiply(report.solution.to_stacked());
    report.solve_residual =
        max_abs_diff(residual, sys.U) / std::max(1.0, max_abs(sys.U));

    report.verification_ok =
        (!report.has_additivity || report.additivity_ok) &&
        (!report.cross_checked ||
         report.cross_check_deviation <= options.tolerance);

    if (options.with_thevenin) {
        report.has_thevenin = true;
        report.thevenin = thevenin(g, options.port_plus, options.port_minus);
        const PortAnalysis open =
            open_circuit_analysis(g, options.port_plus, options.port_minus);
        for (const auto& [branch, controlled] :
             source_order(open.contributions)) {
            if (branch == open.probe_branch) continue;
            const SolutionVector& part =
                controlled ? open.contributions.controlled.at(branch)
                           : open.contributions.independent.at(branch);
            report.v_open_parts.emplace_back(
                open.circuit.branches[static_cast<std::size_t>(branch)].name,
                part.voltages[static_cast<std::size_t>(open.probe_branch)]);
        }
    }

    return report;
}

std::string to_text(const AnalysisReport& report) {
    std::ostringstream out;
    const CircuitGraph& g = report.graph;

    out << "strategy: " << to_string(report.strategy) << "\n\n";
    out << "branch        type      n+        n-        current [A]     voltage [V]\n";
    for (int j = 0; j < g.branch_count(); ++j) {
        const Branch& br = g.branches[static_cast<std::size_t>(j)];
        char line[160];
        std::snprintf(line, sizeof line, "%-13s %-9s %-9s %-9s %-15s %-15s\n",
                      br.name.c_str(), to_string(br.type),
                      br.node_plus.c_str(), br.node_minus.c_str(),
                      short_double(report.solution.currents[static_cast<std::size_t>(j)]).c_str(),
                      short_double(report.solution.voltages[static_cast<std::size_t>(j)]).c_str());
        out << line;
    }

    if (report.has_contributions) {
        const auto order = source_order(report.contributions);
        out << "\ncontributions per source (i and v rows per branch):\n";
        out << "branch     var ";
        for (const auto& [branch, controlled] : order)
            out << "| " << g.branches[static_cast<std::size_t>(branch)].name
                << (controlled ? "*" : "") << " ";
        out << "| total\n";
        for (int j = 0; j < g.branch_count(); ++j) {
            for (int var = 0; var < 2; ++var) {
                char head[32];
                std::snprintf(head, sizeof head, "%-10s %-3s ",
                              g.branches[static_cast<std::size_t>(j)].name.c_str(),
                              var == 0 ? "i" : "v");
                out << head;
                for (const auto& [branch, controlled] : order) {
                    const SolutionVector& part =
                        controlled ? report.contributions.controlled.at(branch)
                                   : report.contributions.independent.at(branch);
                    const double value =
                        var == 0 ? part.currents[static_cast<std::size_t>(j)]
                                 : part.voltages[static_cast<std::size_t>(j)];
                    out << "| " << short_double(value) << " ";
                }
                const double total =
                    var == 0
                        ? report.solution.currents[static_cast<std::size_t>(j)]
                        : report.solution.voltages[static_cast<std::size_t>(j)];
                out << "| " << short_double(total) << "\n";
            }
        }
        out << "(* controlled source acting as equivalent independent source)\n";
    }

    if (report.has_thevenin) {
        out << "\nthevenin at (" << report.thevenin.terminal_plus << ", "
            << report.thevenin.terminal_minus
            << "): v_open = " << short_double(report.thevenin.v_open)
            << " V, r_eq = " << short_double(report.thevenin.r_eq) << " ohm\n";
        out << "v_open contributions:";
        for (const auto& [name, value] : report.v_open_parts)
            out << " " << name << "=" << short_double(value);
        out << "\n";
    }

    out << "\nresiduals: solve " << short_double(report.solve_residual);
    if (report.has_additivity)
        out << ", additivity " << short_double(report.additivity_deviation)
            << (report.additivity_ok ? " (ok)" : " (FAIL)");
    if (report.cross_checked)
        out << ", cross-check " << short_double(report.cross_check_deviation)
            << (report.verification_ok ? " (ok)" : " (FAIL)");
    out << "\n";
    return out.str();
}

std::string to_json(const AnalysisReport& report) {
    std::ostringstream out;
    const CircuitGraph& g = report.graph;

    out << "{\n  \"strategy\": " << jstr(to_string(report.strategy)) << ",\n";

    out << "  \"branches\": [\n";
    for (int j = 0; j < g.branch_count(); ++j) {
        const Branch& br = g.branches[static_cast<std::size_t>(j)];
        out << "    {\"index\": " << (j + 1) << ", \"name\": " << jstr(br.name)
            << ", \"type\": " << jstr(to_string(br.type))
            << ", \"node_plus\": " << jstr(br.node_plus)
            << ", \"node_minus\": " << jstr(br.node_minus)
            << ", \"value\": " << format_double(br.value)
            << ", \"current\": "
            << format_double(report.solution.currents[static_cast<std::size_t>(j)])
            << ", \"voltage\": "
            << format_double(report.solution.voltages[static_cast<std::size_t>(j)])
            << "}" << (j + 1 < g.branch_count() ? "," : "") << "\n";
    }
    out << "  ],\n";

    if (report.has_contributions) {
        const auto order = source_order(report.contributions);
        out << "  \"contributions\": {\n    \"sources\": [";
        for (std::size_t s = 0; s < order.size(); ++s) {
            const auto& [branch, controlled] = order[s];
            out << (s ? ", " : "") << "{\"name\": "
                << jstr(g.branches[static_cast<std::size_t>(branch)].name)
                << ", \"role\": "
                << jstr(controlled ? "controlled" : "independent") << "}";
        }
        out << "],\n    \"table\": [\n";
        for (int j = 0; j < g.branch_count(); ++j) {
            out << "      {\"branch\": "
                << jstr(g.branches[static_cast<std::size_t>(j)].name);
            for (int var = 0; var < 2; ++var) {
                out << ", " << (var == 0 ? "\"current\"" : "\"voltage\"")
                    << ": {";
                for (std::size_t s = 0; s < order.size(); ++s) {
                    const auto& [branch, controlled] = order[s];
                    const SolutionVector& part =
                        controlled ? report.contributions.controlled.at(branch)
                                   : report.contributions.independent.at(branch);
                    out << jstr(g.branches[static_cast<std::size_t>(branch)].name)
                        << ": "
                        << format_double(
                               var == 0
                                   ? part.currents[static_cast<std::size_t>(j)]
                                   : part.voltages[static_cast<std::size_t>(j)])
                        << ", ";
                }
                out << "\"total\": "
                    << format_double(
                           var == 0
                               ? report.solution.currents[static_cast<std::size_t>(j)]
                               : report.solution.voltages[static_cast<std::size_t>(j)])
                    << "}";
            }
            out << "}" << (j + 1 < g.branch_count() ? "," : "") << "\n";
        }
        out << "    ]\n  },\n";
    } else {
        out << "  \"contributions\": null,\n";
    }

    if (report.has_thevenin) {
        out << "  \"thevenin\": {\"terminal_plus\": "
            << jstr(report.thevenin.terminal_plus)
            << ", \"terminal_minus\": " << jstr(report.thevenin.terminal_minus)
            << ", \"v_open\": " << format_double(report.thevenin.v_open)
            << ", \"r_eq\": " << format_double(report.thevenin.r_eq)
            << ", \"v_open_contributions\": {";
        for (std::size_t s = 0; s < report.v_open_parts.size(); ++s)
            out << (s ? ", " : "") << jstr(report.v_open_parts[s].first)
                << ": " << format_double(report.v_open_parts[s].second);
        out << "}},\n";
    } else {
        out << "  \"thevenin\": null,\n";
    }

    out << "  \"residuals\": {\"solve\": " << format_double(report.solve_residual)
        << ", \"additivity\": "
        << (report.has_additivity ? format_double(report.additivity_deviation)
                                  : "null")
        << ", \"cross_check\": "
        << (report.cross_checked ? format_double(report.cross_check_deviation)
                                 : "null")
        << "}\n}\n";
    return out.str();
}

}  // namespace tabsim
