#ifndef TABSIM_SOLVER_HPP
#define TABSIM_SOLVER_HPP

#include <vector>

#include "tabsim/errors.hpp"
#include "tabsim/matrix.hpp"

namespace tabsim {

/// LU factorization with partial (row) pivoting, P*A = L*U.
///
/// A pivot whose magnitude falls below 1e-10 times the largest entry of the
/// input matrix is treated as singular; that threshold separates genuinely
/// ill-posed circuits from benign near-cancellation.
///
/// The factorization is immutable once built, so one instance may serve many
/// right-hand sides, including concurrently.
class LuFactorization {
public:
    static constexpr double kRelativePivotThreshold = 1e-10;
    static constexpr double kRelativeResidualBound = 1e-9;

    std::size_t dimension() const { return lu_.rows(); }
    double smallest_pivot_magnitude() const { return smallest_pivot_; }
    const std::vector<std::size_t>& row_permutation() const { return perm_; }

    /// Unit-lower / upper factors packed in one matrix.
    const Matrix& packed() const { return lu_; }
    /// Copy of the matrix that was factored (kept for residual checks).
    const Matrix& original() const { return original_; }

    friend LuFactorization factor(const Matrix& a, SingularContext context);

private:
    LuFactorization() = default;

    Matrix lu_;
    Matrix original_;
    std::vector<std::size_t> perm_;
    double smallest_pivot_ = 0.0;
};

/// Factor a square matrix. Throws SingularSystem (tagged with `context`)
/// when a pivot falls below the relative threshold.
LuFactorization factor(const Matrix& a,
                       SingularContext context = SingularContext::FullSystem);

/// Solve f*x = rhs. Verifies the relative residual
/// |A*x - rhs|_inf / max(1, |rhs|_inf) <= 1e-9 and throws VerificationError
/// if the bound is missed (a solver defect, not an input property).
Vec solve(const LuFactorization& f, const Vec& rhs);

}  // namespace tabsim

#endif
