#ifndef TABSIM_SUPERPOSITION_HPP
#define TABSIM_SUPERPOSITION_HPP

#include <map>

#include "tabsim/solver.hpp"
#include "tabsim/tableau.hpp"

namespace tabsim {

/// Branch currents and voltages, the two halves of the stacked tableau
/// unknown vector.
struct SolutionVector {
    Vec currents;
    Vec voltages;

    static SolutionVector from_stacked(const Vec& x);
    Vec to_stacked() const;
    int branch_count() const { return static_cast<int>(currents.size()); }
};

/// The solution split per source: one part per independent source and one
/// part per controlled source. Parts are keyed by branch index, so report
/// ordering is deterministic.
struct ContributionSet {
    std::map<int, SolutionVector> independent;
    std::map<int, SolutionVector> controlled;
    SolutionVector total;
};

/// Solve the full tableau system directly.
SolutionVector solve_direct(const TableauSystem& sys);

/// Decompose by the verification route: solve the full system for x, then
/// factor the zeroed-control system once and solve it per source. Each
/// controlled source acts as an independent source supplying gain * x_m,
/// with the control value x_m read from the full solution.
ContributionSet decompose_via_full_solution(const TableauSystem& sys);

/// Decompose constructively, never solving the full system: from the
/// zeroed-control solution and one unit response per controlled source,
/// assemble and solve the small system in the control values, then scale
/// the unit responses. Totals match solve_direct.
ContributionSet decompose_via_control_system(const TableauSystem& sys);

struct AdditivityReport {
    double max_deviation = 0.0;
    double tolerance = 0.0;
    int worst_component = -1;  // index into the stacked vector
    bool pass = true;
};

/// Check total == sum of parts, component-wise, within
/// rel_tol * max(1, |total|_inf).
AdditivityReport verify_additivity(const ContributionSet& cs,
                                   double rel_tol = 1e-8);

/// Component-wise sum of every stored part (stacked layout).
Vec sum_of_parts(const ContributionSet& cs);

/// Worst relative residual of L0 * x_k = gain * x_m over the controlled
/// parts; 0 when there are none.
double subcircuit_law_residual(const TableauSystem& sys,
                               const ContributionSet& cs);

}  // namespace tabsim

#endif
