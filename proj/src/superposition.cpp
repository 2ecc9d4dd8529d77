#include "tabsim/superposition.hpp"

#include <cassert>
#include <cmath>

namespace tabsim {

SolutionVector SolutionVector::from_stacked(const Vec& x) {
    assert(x.size() % 2 == 0);
    const std::size_t b = x.size() / 2;
    SolutionVector s;
    s.currents.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(b));
    s.voltages.assign(x.begin() + static_cast<std::ptrdiff_t>(b), x.end());
    return s;
}

Vec SolutionVector::to_stacked() const {
    Vec x(currents);
    x.insert(x.end(), voltages.begin(), voltages.end());
    return x;
}

namespace {

/// One zeroed-control solve per independent source, keeping only that
/// source's entry of U.
std::map<int, SolutionVector> split_independent(const TableauSystem& sys,
                                                const LuFactorization& zeroed) {
    std::map<int, SolutionVector> parts;
    for (const auto& [branch, row] : sys.source_rows) {
        Vec rhs(static_cast<std::size_t>(sys.dimension()), 0.0);
        rhs[static_cast<std::size_t>(row)] = sys.U[static_cast<std::size_t>(row)];
        parts.emplace(branch, SolutionVector::from_stacked(solve(zeroed, rhs)));
    }
    return parts;
}

int controlled_branch_of_row(const TableauSystem& sys, int row) {
    // Constitutive rows occupy the trailing b rows, one per branch.
    return row - sys.branch_count;
}

}  // namespace

SolutionVector solve_direct(const TableauSystem& sys) {
    const LuFactorization f = factor(sys.L, SingularContext::FullSystem);
    return SolutionVector::from_stacked(solve(f, sys.U));
}

ContributionSet decompose_via_full_solution(const TableauSystem& sys) {
    const LuFactorization full = factor(sys.L, SingularContext::FullSystem);
    const Vec x = solve(full, sys.U);

    const LuFactorization zeroed =
        factor(zero_controls(sys).L, SingularContext::ZeroedControls);

    ContributionSet cs;
    cs.total = SolutionVector::from_stacked(x);
    cs.independent = split_independent(sys, zeroed);

    for (const ControlEntry& entry : sys.control_coeffs) {
        // Sub-circuit where the controlled source supplies gain * x_m with
        // the control value taken from the full solution, not the part.
        Vec rhs(x.size(), 0.0);
        rhs[static_cast<std::size_t>(entry.row)] =
            entry.gain * x[static_cast<std::size_t>(entry.col)];
        cs.controlled.emplace(controlled_branch_of_row(sys, entry.row),
                              SolutionVector::from_stacked(solve(zeroed, rhs)));
    }
    return cs;
}

ContributionSet decompose_via_control_system(const TableauSystem& sys) {
    // Without controls L0 is L itself; report singularity against the
    // plain tableau in that case.
    const LuFactorization zeroed =
        factor(zero_controls(sys).L, sys.control_coeffs.empty()
                                         ? SingularContext::FullSystem
                                         : SingularContext::ZeroedControls);
    const Vec x0 = solve(zeroed, sys.U);

    const std::size_t m = sys.control_coeffs.size();

    // Unit response per controlled source: the zeroed-control circuit driven
    // by a unit source value on that row alone.
    std::vector<Vec> unit_responses;
    unit_responses.reserve(m);
    for (const ControlEntry& entry : sys.control_coeffs) {
        Vec rhs(x0.size(), 0.0);
        rhs[static_cast<std::size_t>(entry.row)] = 1.0;
        unit_responses.push_back(solve(zeroed, rhs));
    }

    // The control values c_j = x_(m_j) satisfy (I - G) c = c0 with
    // G_jl = gain_l * w_l[m_j]: each source's value feeds back through the
    // other sub-circuits' responses at the control coordinates.
    Vec control_values;
    if (m > 0) {
        Matrix a = Matrix::identity(m);
        Vec c0(m, 0.0);
        for (std::size_t j = 0; j < m; ++j) {
            const auto coord =
                static_cast<std::size_t>(sys.control_coeffs[j].col);
            c0[j] = x0[coord];
            for (std::size_t l = 0; l < m; ++l)
                a(j, l) -= sys.control_coeffs[l].gain * unit_responses[l][coord];
        }
        const LuFactorization control_lu =
            factor(a, SingularContext::ControlSystem);
        control_values = solve(control_lu, c0);
    }

    ContributionSet cs;
    cs.independent = split_independent(sys, zeroed);

    Vec total = x0;
    for (std::size_t k = 0; k < m; ++k) {
        const ControlEntry& entry = sys.control_coeffs[k];
        Vec part(x0.size(), 0.0);
        const double scale = entry.gain * control_values[k];
        for (std::size_t i = 0; i < part.size(); ++i) {
            part[i] = scale * unit_responses[k][i];
            total[i] += part[i];
        }
        cs.controlled.emplace(controlled_branch_of_row(sys, entry.row),
                              SolutionVector::from_stacked(part));
    }
    cs.total = SolutionVector::from_stacked(total);
    return cs;
}

Vec sum_of_parts(const ContributionSet& cs) {
    Vec sum(cs.total.to_stacked().size(), 0.0);
    auto accumulate = [&sum](const std::map<int, SolutionVector>& parts) {
        for (const auto& [branch, part] : parts) {
            const Vec stacked = part.to_stacked();
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += stacked[i];
        }
    };
    accumulate(cs.independent);
    accumulate(cs.controlled);
    return sum;
}

AdditivityReport verify_additivity(const ContributionSet& cs, double rel_tol) {
    const Vec total = cs.total.to_stacked();
    const Vec sum = sum_of_parts(cs);

    AdditivityReport report;
    report.tolerance = rel_tol * std::max(1.0, max_abs(total));
    for (std::size_t i = 0; i < total.size(); ++i) {
        const double dev = std::abs(total[i] - sum[i]);
        if (dev > report.max_deviation) {
            report.max_deviation = dev;
            report.worst_component = static_cast<int>(i);
        }
    }
    report.pass = report.max_deviation <= report.tolerance;
    return report;
}

double subcircuit_law_residual(const TableauSystem& sys,
                               const ContributionSet& cs) {
    if (cs.controlled.empty()) return 0.0;
    const Matrix zeroed = zero_controls(sys).L;
    const Vec x = cs.total.to_stacked();

    double worst = 0.0;
    for (const ControlEntry& entry : sys.control_coeffs) {
        const SolutionVector& part =
            cs.controlled.at(controlled_branch_of_row(sys, entry.row));
        Vec rhs(x.size(), 0.0);
        rhs[static_cast<std::size_t>(entry.row)] =
            entry.gain * x[static_cast<std::size_t>(entry.col)];
        const Vec lhs = zeroed.multiply(part.to_stacked());
        const double residual =
            max_abs_diff(lhs, rhs) / std::max(1.0, max_abs(rhs));
        worst = std::max(worst, residual);
    }
    return worst;
}

}  // namespace tabsim
